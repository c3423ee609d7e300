#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boardsplit/board.hpp"

namespace boardsplit::validation {

enum class Suite { Formulas, MonteCarlo, Oracle };

std::optional<Suite> parse_suite(std::string_view name);
const char* to_string(Suite suite);

enum class Status { Pass, Fail, Info };

struct Check {
    std::string name;
    Status status;
    std::string detail;
};

struct Report {
    Suite suite;
    std::vector<Check> checks;
    bool passed() const;
    /// Machine-readable form: {"suite", "passed", "checks": [{name, status, detail}]}.
    std::string to_json() const;
};

Report run_suite(Suite suite, std::uint64_t seed = 1);

/// Explicit-sum form of the arbitrary-chooser error:
/// sum_{i=1}^{B-1} ((B - i)/B) C(B, i) P^i (1 - P)^{B - i}.
double pr_r_errs_sum(int branching, double trap_p);

/// A random position holding a planted trap of `kind`: a random descent to a
/// random ply (an even ply for HDiagOnes), then a row of 1's, a column of 0's or
/// one of the diagonals written into that view. The board lives in `board`.
struct PlantedPosition {
    std::vector<std::uint8_t> cells;
    int ply;
    int row_start, row_count, col_start, col_count;
};

PlantedPosition plant_trap(const GameConfig& config, TrapKind kind, std::uint64_t seed);

/// Counts over `count` planted positions per kind whose exact winner matches the trap.
struct SoundnessTally {
    int positions = 0;
    int detected = 0;   // detect_trap reported a trap of the planted side
    int sound = 0;      // exact_solve winner equals the trap's beneficiary
};

SoundnessTally trap_soundness(const GameConfig& config, TrapKind kind, int count, std::uint64_t seed);

struct OracleTally {
    int games = 0;
    int decisions = 0;
    int agreements = 0;
};

/// Plays `games` seeded games with full-depth search for both players and checks
/// every decision against exact_solve.
OracleTally full_depth_agreement(const GameConfig& config, int games, std::uint64_t seed);

}  // namespace boardsplit::validation
