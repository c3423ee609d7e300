#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boardsplit/board.hpp"
#include "boardsplit/search.hpp"

namespace boardsplit {

struct PlayerSettings {
    int lookahead = 0;
    EvaluatorKind evaluator = EvaluatorKind::CountOnes;
};

struct MoveRecord {
    int ply;
    Player mover;
    MoveDecision decision;
};

struct GameRecord {
    Player winner;
    std::vector<MoveRecord> moves;
};

// Seed layout: board i of a tournament uses board_seed(master, i); its RandomTips
// scores come from game_seed(master, i), derived per (k, ply) by move_stream().
std::uint64_t board_seed(std::uint64_t master_seed, std::uint64_t game_index);
std::uint64_t game_seed(std::uint64_t master_seed, std::uint64_t game_index);
TipStream move_stream(std::uint64_t game_seed, int h_lookahead, int ply);

GameRecord play_game(const RootBoard& root, const GameConfig& config, const PlayerSettings& horizontal,
                     const PlayerSettings& vertical, std::uint64_t game_seed);

/// Both players use `evaluator`.
Player play_game(const RootBoard& root, const GameConfig& config, int h_lookahead, int v_lookahead,
                 EvaluatorKind evaluator, std::uint64_t game_seed);

enum class Parity { Even, Odd };

/// Even: 0, 2, ..., 2(D-1). Odd: 1, 3, ..., 2D-3.
std::vector<int> lookahead_series(int depth, Parity parity);

struct TournamentSpec {
    GameConfig config;
    int n_games = 100;
    std::vector<int> k_values{};
    EvaluatorKind evaluator = EvaluatorKind::CountOnes;
    int v_lookahead = 0;
    std::uint64_t master_seed = 0;
    /// Heterogeneous matches only; unset means V uses `evaluator`.
    std::optional<EvaluatorKind> v_evaluator{};
};

/// Throws std::invalid_argument when the spec breaks its invariants.
void validate(const TournamentSpec& spec);

/// Canonical JSON (field names as in TournamentSpec) and its FNV-1a 64 hash.
std::string to_json(const TournamentSpec& spec);
TournamentSpec tournament_spec_from_json(const std::string& text);
std::uint64_t spec_hash(const TournamentSpec& spec);

struct TournamentPoint {
    int k;
    int h_wins;
    int n_games;
    double fraction() const { return n_games == 0 ? 0.0 : static_cast<double>(h_wins) / n_games; }
    bool operator==(const TournamentPoint&) const = default;
};

struct TournamentResult {
    std::vector<TournamentPoint> points;
    std::uint64_t spec_hash = 0;
    std::uint64_t master_seed = 0;

    bool operator==(const TournamentResult&) const = default;
};

/// Each game's board is generated once and replayed for every k.
/// `workers` = 0 picks the hardware concurrency; results do not depend on it.
TournamentResult run_tournament(const TournamentSpec& spec, unsigned workers = 0);

void write_tournament_csv(std::ostream& out, const TournamentSpec& spec, const TournamentResult& result);

struct PathologyReport {
    /// Largest decrease in H-win fraction between consecutive k (negative if none).
    double max_drop;
    /// Largest two-proportion z over consecutive decreases.
    double z_score;
    bool is_pathological;
    int drop_from_k;
    int drop_to_k;
};

/// Throws std::invalid_argument with fewer than two points.
PathologyReport pathology_index(std::span<const TournamentPoint> curve, double z_threshold = 2.0);

/// Pooled two-proportion z for (x1/n1) - (x2/n2).
double two_proportion_z(int x1, int n1, int x2, int n2);

struct DecisionQualityOptions {
    /// Ply of the sampled decision; positions are reached by uniformly random moves.
    int ply = 1;
    bool full_depth = false;
    unsigned workers = 0;
};

struct DecisionQualityPoint {
    int k;
    int n_positions;
    int correct_exact;
    int correct_trapwise;
    /// Positions where some child is a trap favoring the mover.
    int trap_available;
    /// Of those, how many chose such a trap.
    int trap_taken;
    double correct_rate_exact() const { return static_cast<double>(correct_exact) / n_positions; }
    double correct_rate_trapwise() const { return static_cast<double>(correct_trapwise) / n_positions; }
};

struct DecisionQualityResult {
    std::vector<DecisionQualityPoint> points;
};

DecisionQualityResult decision_quality(const GameConfig& config, std::span<const int> k_list, int n_positions,
                                       EvaluatorKind evaluator, std::uint64_t master_seed,
                                       const DecisionQualityOptions& options = {});

void write_decision_quality_csv(std::ostream& out, const GameConfig& config, EvaluatorKind evaluator,
                                std::uint64_t master_seed, const DecisionQualityOptions& options,
                                const DecisionQualityResult& result);

inline constexpr const char* kToolVersion = "boardsplit 1.0.0";

}  // namespace boardsplit
