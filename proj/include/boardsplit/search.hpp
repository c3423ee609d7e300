#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "boardsplit/board.hpp"
#include "boardsplit/rng.hpp"

namespace boardsplit {

enum class EvaluatorKind : std::uint8_t {
    CountOnes,   // N: ones-count at the tips
    TrapAware,   // Y: eval_e at the tips
    RandomTips   // R: i.i.d. uniform tip scores
};

const char* to_string(EvaluatorKind kind);
/// Short CLI/CSV names: "n", "y", "r".
const char* short_name(EvaluatorKind kind);
std::optional<EvaluatorKind> parse_evaluator(std::string_view name);

/// Source of RandomTips scores. A tip's score is a hash of the stream key and
/// the tip's (ply, row_start, col_start), so it does not depend on visit order.
class TipStream {
public:
    constexpr TipStream() = default;
    explicit constexpr TipStream(std::uint64_t key) : key_(key) {}

    constexpr std::uint64_t key() const { return key_; }
    constexpr TipStream derive(std::uint64_t tag) const { return TipStream(derive_seed(key_, tag)); }

    /// Uniform in [0, 2^53).
    Score draw(const BoardView& view) const
    {
        const auto id = (std::uint64_t(view.ply) << 40) ^ (std::uint64_t(view.row_start) << 20) ^
                        std::uint64_t(view.col_start);
        return static_cast<Score>(splitmix64(key_ ^ splitmix64(id)) >> 11);
    }

private:
    std::uint64_t key_ = 0;
};

struct SearchOptions {
    /// Ignore the 2(D-1) cutoff and let tips reach the leaves.
    bool full_depth = false;
    /// Alpha-beta below the root children; child values are unchanged.
    bool alpha_beta = false;
};

/// Level of the tips for a decision made at `ply` with lookahead k:
/// max(ply + 1, min(ply + 1 + k, cutoff)), cutoff = 2(D-1) or 2D for full depth.
int tip_level(int ply, int lookahead, const GameConfig& config, bool full_depth = false);

Score tip_score(const BoardView& view, EvaluatorKind evaluator, const GameConfig& config, const TipStream& stream);

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t tips = 0;
};

/// Minimax of the tip scores at `tip_level`; Vertical minimizes, Horizontal maximizes.
Score minimax_value(const BoardView& view, int tip_level, EvaluatorKind evaluator, const GameConfig& config,
                    const TipStream& stream, const SearchOptions& options = {}, SearchStats* stats = nullptr);

struct MoveDecision {
    int chosen_index = 0;
    Score backed_value = 0;
    std::vector<Score> child_values;
    /// Number of children attaining backed_value.
    int tie_count = 0;
};

/// Evaluates each child down to tip_level(view.ply, k); ties go to the lowest index.
MoveDecision choose_move(const BoardView& view, int lookahead, EvaluatorKind evaluator, const GameConfig& config,
                         const TipStream& stream, const SearchOptions& options = {}, SearchStats* stats = nullptr);

struct ExactResult {
    Player winner = Player::Vertical;
    /// Children that keep the mover's best achievable outcome; empty at a leaf.
    std::vector<int> optimal_moves;
};

/// True value under perfect play: the last cell decides (1 = H wins).
bool horizontal_wins(const BoardView& view);
ExactResult exact_solve(const BoardView& view);

bool is_correct_exact(const MoveDecision& decision, const ExactResult& exact);
bool is_correct_exact(const MoveDecision& decision, const BoardView& view, Player mover);

std::vector<std::optional<TrapKind>> children_traps(const BoardView& view, DiagonalRule rule = DiagonalRule::Both);

/// False iff the mover skipped an available trap that wins for her.
bool is_correct_trapwise(const MoveDecision& decision, std::span<const std::optional<TrapKind>> children, Player mover);

}  // namespace boardsplit
