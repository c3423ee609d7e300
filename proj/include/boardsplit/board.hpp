#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "boardsplit/config.hpp"

namespace boardsplit {

/// Values on the ones-count scale. Trap values are +/- B^{2D}.
using Score = std::int64_t;

/// Immutable B^D x B^D bit matrix plus the run-count tables that make every
/// rectangle, row, column and diagonal query O(1).
///
/// Cells are packed 64 per word, one padded word run per row. Tables:
///   row_prefix_[r][c]   ones in row r, columns [0, c)
///   col_prefix_[c][r]   ones in column c, rows [0, r)
///   diag_prefix_[r][c]  ones on the (c - r) diagonal strictly above (r, c)
///   adiag_prefix_[r][c] ones at cells (r - 1 - j, c + j), j >= 0
///   area_prefix_[r][c]  ones in rows [0, r) x columns [0, c)
class RootBoard {
public:
    /// `cells` is row-major, side*side entries of 0 or 1, side = B^D.
    RootBoard(int branching, int depth, std::span<const std::uint8_t> cells);

    int branching() const { return branching_; }
    int depth() const { return depth_; }
    int side() const { return side_; }

    bool cell(int row, int col) const
    {
        const auto w = words_[static_cast<std::size_t>(row) * words_per_row_ + (col >> 6)];
        return (w >> (col & 63)) & 1U;
    }

    /// Ones in row `row`, columns [col, col + len).
    int row_ones(int row, int col, int len) const
    {
        const auto* r = &row_prefix_[static_cast<std::size_t>(row) * stride_];
        return r[col + len] - r[col];
    }

    /// Ones in column `col`, rows [row, row + len).
    int col_ones(int col, int row, int len) const
    {
        const auto* c = &col_prefix_[static_cast<std::size_t>(col) * stride_];
        return c[row + len] - c[row];
    }

    /// Ones on the len-cell diagonal running down-right from (row, col).
    int diag_ones(int row, int col, int len) const
    {
        return diag_prefix_[index(row + len, col + len)] - diag_prefix_[index(row, col)];
    }

    /// Ones on the len-cell anti-diagonal of the len x len square whose top-left
    /// corner is (row, col): cells (row + i, col + len - 1 - i).
    int adiag_ones(int row, int col, int len) const
    {
        return adiag_prefix_[index(row + len, col)] - adiag_prefix_[index(row, col + len)];
    }

    std::int64_t area_ones(int row, int col, int rows, int cols) const
    {
        const auto r1 = row + rows;
        const auto c1 = col + cols;
        return std::int64_t{area_prefix_[index(r1, c1)]} - area_prefix_[index(row, c1)] -
               area_prefix_[index(r1, col)] + area_prefix_[index(row, col)];
    }

    bool operator==(const RootBoard& other) const
    {
        return side_ == other.side_ && branching_ == other.branching_ && words_ == other.words_;
    }

private:
    std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * stride_ + c; }

    int branching_;
    int depth_;
    int side_;
    std::size_t words_per_row_;
    std::size_t stride_;  // side + 1
    std::vector<std::uint64_t> words_;
    std::vector<std::uint16_t> row_prefix_;
    std::vector<std::uint16_t> col_prefix_;
    std::vector<std::uint16_t> diag_prefix_;
    std::vector<std::uint16_t> adiag_prefix_;
    std::vector<std::uint32_t> area_prefix_;
};

/// A game position: a rectangle of a RootBoard. The root must outlive the view.
struct BoardView {
    const RootBoard* root = nullptr;
    int row_start = 0;
    int row_count = 0;
    int col_start = 0;
    int col_count = 0;
    int ply = 0;

    static BoardView whole(const RootBoard& board)
    {
        return {&board, 0, board.side(), 0, board.side(), 0};
    }

    bool is_square() const { return row_count == col_count; }
    bool is_terminal() const { return ply == 2 * root->depth(); }
    Player mover() const { return mover_at(ply); }
    std::int64_t area() const { return std::int64_t{row_count} * col_count; }
    bool cell(int r, int c) const { return root->cell(row_start + r, col_start + c); }

    /// Unchecked child for the side to move; used on hot search paths.
    BoardView child(int index) const
    {
        const int b = root->branching();
        BoardView next = *this;
        next.ply = ply + 1;
        if (ply % 2 == 0) {
            next.col_count = col_count / b;
            next.col_start = col_start + index * next.col_count;
        } else {
            next.row_count = row_count / b;
            next.row_start = row_start + index * next.row_count;
        }
        return next;
    }

    bool operator==(const BoardView& o) const = default;
};

enum class TrapKind : std::uint8_t { HRowOnes, HDiagOnes, VColZeros };

const char* to_string(TrapKind kind);

/// True when the trap is a forced win for `player`.
constexpr bool favors(TrapKind kind, Player player)
{
    return (kind == TrapKind::VColZeros) == (player == Player::Vertical);
}

/// Each cell is an independent Bernoulli(p) draw: cell = to_unit(gen()) < p,
/// gen = std::mt19937_64(splitmix64(seed)), cells in row-major order.
RootBoard generate_board(const GameConfig& config, std::uint64_t seed);

/// Keeps the index-th of B equal sections: columns for Vertical, rows for
/// Horizontal. Throws std::invalid_argument on wrong mover or a finished game,
/// std::out_of_range on a bad index.
BoardView split(const BoardView& view, Player mover, int index);

std::int64_t count_ones(const BoardView& view);

/// Row of 1's and diagonal of 1's (square views only) are reported before a
/// column of 0's; the two groups cannot co-occur.
std::optional<TrapKind> detect_trap(const BoardView& view, DiagonalRule rule = DiagonalRule::Both);

inline Score eval_n(const BoardView& view) { return count_ones(view); }

Score eval_e(const BoardView& view, const GameConfig& config);

// Text format: "B D" on the first line, then B^D lines of B^D '0'/'1' characters.
class BoardFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_board(std::ostream& out, const RootBoard& board);
RootBoard read_board(std::istream& in);

}  // namespace boardsplit
