#include "boardsplit/board.hpp"

#include <random>

#include "boardsplit/rng.hpp"

namespace boardsplit {

const char* to_string(Player p) { return p == Player::Vertical ? "V" : "H"; }

const char* to_string(TrapKind kind)
{
    switch (kind) {
    case TrapKind::HRowOnes: return "HRowOnes";
    case TrapKind::HDiagOnes: return "HDiagOnes";
    case TrapKind::VColZeros: return "VColZeros";
    }
    return "?";
}

int checked_side(int branching, int exponent)
{
    std::int64_t side = 1;
    for (int i = 0; i < exponent; ++i) {
        side *= branching;
        if (side > kMaxSide) return -1;
    }
    return static_cast<int>(side);
}

GameConfig::GameConfig(int branching, int depth, double p, DiagonalRule diagonals)
    : branching_(branching), depth_(depth), p_(p), diagonals_(diagonals)
{
    if (branching < 2) throw std::invalid_argument("branching factor must be at least 2");
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
    side_ = checked_side(branching, depth);
    if (side_ < 0) throw ConfigError("board side B^D exceeds " + std::to_string(kMaxSide));
}

RootBoard::RootBoard(int branching, int depth, std::span<const std::uint8_t> cells)
    : branching_(branching), depth_(depth)
{
    if (branching < 2 || depth < 1) throw std::invalid_argument("invalid board geometry");
    side_ = checked_side(branching, depth);
    if (side_ < 0) throw ConfigError("board side B^D exceeds " + std::to_string(kMaxSide));
    const auto n = static_cast<std::size_t>(side_);
    if (cells.size() != n * n) throw std::invalid_argument("cell count does not match B^D x B^D");

    words_per_row_ = (n + 63) / 64;
    stride_ = n + 1;
    words_.assign(n * words_per_row_, 0);
    row_prefix_.assign(n * stride_, 0);
    col_prefix_.assign(n * stride_, 0);
    diag_prefix_.assign(stride_ * stride_, 0);
    adiag_prefix_.assign(stride_ * stride_, 0);
    area_prefix_.assign(stride_ * stride_, 0);

    for (std::size_t r = 0; r < n; ++r) {
        std::uint32_t running = 0;
        for (std::size_t c = 0; c < n; ++c) {
            const std::uint16_t bit = cells[r * n + c] ? 1 : 0;
            if (bit) words_[r * words_per_row_ + c / 64] |= std::uint64_t{1} << (c % 64);
            running += bit;
            row_prefix_[r * stride_ + c + 1] = static_cast<std::uint16_t>(row_prefix_[r * stride_ + c] + bit);
            col_prefix_[c * stride_ + r + 1] = static_cast<std::uint16_t>(col_prefix_[c * stride_ + r] + bit);
            diag_prefix_[(r + 1) * stride_ + c + 1] = static_cast<std::uint16_t>(diag_prefix_[r * stride_ + c] + bit);
            adiag_prefix_[(r + 1) * stride_ + c] = static_cast<std::uint16_t>(adiag_prefix_[r * stride_ + c + 1] + bit);
            area_prefix_[(r + 1) * stride_ + c + 1] = area_prefix_[r * stride_ + c + 1] + running;
        }
    }
}

RootBoard generate_board(const GameConfig& config, std::uint64_t seed)
{
    const auto n = static_cast<std::size_t>(config.side());
    std::vector<std::uint8_t> cells(n * n);
    std::mt19937_64 gen(splitmix64(seed));
    const double p = config.p();
    for (auto& c : cells) c = to_unit(gen()) < p ? 1 : 0;
    return RootBoard(config.branching(), config.depth(), cells);
}

BoardView split(const BoardView& view, Player mover, int index)
{
    if (view.root == nullptr) throw std::invalid_argument("view has no board");
    if (view.is_terminal()) throw std::invalid_argument("game is over; no split possible");
    if (mover != view.mover()) throw std::invalid_argument("wrong mover for this ply");
    if (index < 0 || index >= view.root->branching()) throw std::out_of_range("split index out of range");
    return view.child(index);
}

std::int64_t count_ones(const BoardView& view)
{
    return view.root->area_ones(view.row_start, view.col_start, view.row_count, view.col_count);
}

std::optional<TrapKind> detect_trap(const BoardView& view, DiagonalRule rule)
{
    const RootBoard& b = *view.root;
    for (int r = view.row_start; r < view.row_start + view.row_count; ++r) {
        if (b.row_ones(r, view.col_start, view.col_count) == view.col_count) return TrapKind::HRowOnes;
    }
    if (view.is_square()) {
        const int n = view.row_count;
        if (b.diag_ones(view.row_start, view.col_start, n) == n) return TrapKind::HDiagOnes;
        if (rule == DiagonalRule::Both && b.adiag_ones(view.row_start, view.col_start, n) == n)
            return TrapKind::HDiagOnes;
    }
    for (int c = view.col_start; c < view.col_start + view.col_count; ++c) {
        if (b.col_ones(c, view.row_start, view.row_count) == 0) return TrapKind::VColZeros;
    }
    return std::nullopt;
}

Score eval_e(const BoardView& view, const GameConfig& config)
{
    if (const auto trap = detect_trap(view, config.diagonals())) {
        return *trap == TrapKind::VColZeros ? -config.trap_magnitude() : config.trap_magnitude();
    }
    return count_ones(view);
}

}  // namespace boardsplit
