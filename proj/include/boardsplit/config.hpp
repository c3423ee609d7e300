#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace boardsplit {

/// Thrown when B^D (or its square) does not fit the board index types.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vertical moves first and at every even ply; Horizontal at odd plies.
enum class Player : std::uint8_t { Vertical, Horizontal };

constexpr Player mover_at(int ply) { return ply % 2 == 0 ? Player::Vertical : Player::Horizontal; }

constexpr Player opponent(Player p)
{
    return p == Player::Vertical ? Player::Horizontal : Player::Vertical;
}

const char* to_string(Player p);

/// Which square-board diagonals count as a forced win for H.
enum class DiagonalRule : std::uint8_t {
    Both,     // top-left→bottom-right and top-right→bottom-left
    MainOnly  // top-left→bottom-right only
};

/// Largest board side the prefix tables can index (16-bit run counts).
inline constexpr int kMaxSide = 65535;

/// Game parameters: branching factor B, number of rounds D, and the
/// probability p that a cell holds a 1. The board side is B^D.
class GameConfig {
public:
    GameConfig(int branching, int depth, double p, DiagonalRule diagonals = DiagonalRule::Both);

    int branching() const { return branching_; }
    int depth() const { return depth_; }
    double p() const { return p_; }
    DiagonalRule diagonals() const { return diagonals_; }

    int side() const { return side_; }
    /// B^{2D}: the number of cells of the initial board, used as the trap value.
    std::int64_t trap_magnitude() const { return std::int64_t{side_} * side_; }
    int total_plies() const { return 2 * depth_; }
    /// Deepest level a lookahead may reach: H's next-to-last move, 2(D-1).
    int cutoff_level() const { return 2 * (depth_ - 1); }

    GameConfig with_p(double p) const { return {branching_, depth_, p, diagonals_}; }

private:
    int branching_;
    int depth_;
    double p_;
    DiagonalRule diagonals_;
    int side_;
};

/// B^e with overflow detection; returns -1 when the result exceeds kMaxSide.
int checked_side(int branching, int exponent);

}  // namespace boardsplit
