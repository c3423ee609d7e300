#include "boardsplit/search.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace boardsplit {

const char* to_string(EvaluatorKind kind)
{
    switch (kind) {
    case EvaluatorKind::CountOnes: return "CountOnes";
    case EvaluatorKind::TrapAware: return "TrapAware";
    case EvaluatorKind::RandomTips: return "RandomTips";
    }
    return "?";
}

const char* short_name(EvaluatorKind kind)
{
    switch (kind) {
    case EvaluatorKind::CountOnes: return "n";
    case EvaluatorKind::TrapAware: return "y";
    case EvaluatorKind::RandomTips: return "r";
    }
    return "?";
}

std::optional<EvaluatorKind> parse_evaluator(std::string_view name)
{
    if (name == "n" || name == "N" || name == "CountOnes") return EvaluatorKind::CountOnes;
    if (name == "y" || name == "Y" || name == "TrapAware") return EvaluatorKind::TrapAware;
    if (name == "r" || name == "R" || name == "RandomTips") return EvaluatorKind::RandomTips;
    return std::nullopt;
}

int tip_level(int ply, int lookahead, const GameConfig& config, bool full_depth)
{
    const int cutoff = full_depth ? config.total_plies() : config.cutoff_level();
    return std::max(ply + 1, std::min(ply + 1 + lookahead, cutoff));
}

Score tip_score(const BoardView& view, EvaluatorKind evaluator, const GameConfig& config, const TipStream& stream)
{
    switch (evaluator) {
    case EvaluatorKind::CountOnes: return eval_n(view);
    case EvaluatorKind::TrapAware: return eval_e(view, config);
    case EvaluatorKind::RandomTips: return stream.draw(view);
    }
    return 0;
}

namespace {

constexpr Score kLowest = std::numeric_limits<Score>::min();
constexpr Score kHighest = std::numeric_limits<Score>::max();

template <class Tip>
struct Minimax {
    int tip;
    int branching;
    const Tip& score;
    SearchStats* stats;

    Score plain(const BoardView& v) const
    {
        if (stats) ++stats->nodes;
        if (v.ply == tip) {
            if (stats) ++stats->tips;
            return score(v);
        }
        if (v.ply % 2 == 1) {
            Score best = kLowest;
            for (int i = 0; i < branching; ++i) best = std::max(best, plain(v.child(i)));
            return best;
        }
        Score best = kHighest;
        for (int i = 0; i < branching; ++i) best = std::min(best, plain(v.child(i)));
        return best;
    }

    // Fail-hard alpha-beta; exact whenever the true value lies inside (alpha, beta).
    Score pruned(const BoardView& v, Score alpha, Score beta) const
    {
        if (stats) ++stats->nodes;
        if (v.ply == tip) {
            if (stats) ++stats->tips;
            return score(v);
        }
        if (v.ply % 2 == 1) {
            Score best = kLowest;
            for (int i = 0; i < branching; ++i) {
                best = std::max(best, pruned(v.child(i), alpha, beta));
                alpha = std::max(alpha, best);
                if (alpha >= beta) break;
            }
            return best;
        }
        Score best = kHighest;
        for (int i = 0; i < branching; ++i) {
            best = std::min(best, pruned(v.child(i), alpha, beta));
            beta = std::min(beta, best);
            if (alpha >= beta) break;
        }
        return best;
    }
};

template <class Tip>
Score search(const BoardView& view, int tip, const Tip& score, const SearchOptions& options, SearchStats* stats)
{
    const Minimax<Tip> mm{tip, view.root->branching(), score, stats};
    return options.alpha_beta ? mm.pruned(view, kLowest, kHighest) : mm.plain(view);
}

}  // namespace

Score minimax_value(const BoardView& view, int tip_level, EvaluatorKind evaluator, const GameConfig& config,
                    const TipStream& stream, const SearchOptions& options, SearchStats* stats)
{
    if (tip_level < view.ply || tip_level > config.total_plies())
        throw std::invalid_argument("tip level must lie in [view.ply, 2D]");
    switch (evaluator) {
    case EvaluatorKind::CountOnes:
        return search(view, tip_level, [](const BoardView& v) { return eval_n(v); }, options, stats);
    case EvaluatorKind::TrapAware:
        return search(view, tip_level, [&config](const BoardView& v) { return eval_e(v, config); }, options, stats);
    case EvaluatorKind::RandomTips:
        return search(view, tip_level, [&stream](const BoardView& v) { return stream.draw(v); }, options, stats);
    }
    return 0;
}

MoveDecision choose_move(const BoardView& view, int lookahead, EvaluatorKind evaluator, const GameConfig& config,
                         const TipStream& stream, const SearchOptions& options, SearchStats* stats)
{
    if (view.is_terminal()) throw std::invalid_argument("game is over; no move to choose");
    if (lookahead < 0) throw std::invalid_argument("lookahead must be non-negative");
    const int tip = tip_level(view.ply, lookahead, config, options.full_depth);
    const int b = view.root->branching();
    const bool maximize = view.mover() == Player::Horizontal;

    MoveDecision d;
    d.child_values.reserve(b);
    for (int i = 0; i < b; ++i) {
        d.child_values.push_back(minimax_value(view.child(i), tip, evaluator, config, stream, options, stats));
    }
    const auto best = maximize ? std::max_element(d.child_values.begin(), d.child_values.end())
                               : std::min_element(d.child_values.begin(), d.child_values.end());
    d.chosen_index = static_cast<int>(best - d.child_values.begin());
    d.backed_value = *best;
    d.tie_count = static_cast<int>(std::count(d.child_values.begin(), d.child_values.end(), *best));
    return d;
}

bool horizontal_wins(const BoardView& view)
{
    if (view.is_terminal()) return view.cell(0, 0);
    const int b = view.root->branching();
    if (view.mover() == Player::Horizontal) {
        for (int i = 0; i < b; ++i)
            if (horizontal_wins(view.child(i))) return true;
        return false;
    }
    for (int i = 0; i < b; ++i)
        if (!horizontal_wins(view.child(i))) return false;
    return true;
}

ExactResult exact_solve(const BoardView& view)
{
    ExactResult result;
    if (view.is_terminal()) {
        result.winner = view.cell(0, 0) ? Player::Horizontal : Player::Vertical;
        return result;
    }
    const Player mover = view.mover();
    const int b = view.root->branching();
    std::vector<int> winning;
    for (int i = 0; i < b; ++i) {
        const Player w = horizontal_wins(view.child(i)) ? Player::Horizontal : Player::Vertical;
        if (w == mover) winning.push_back(i);
    }
    if (!winning.empty()) {
        result.winner = mover;
        result.optimal_moves = std::move(winning);
    } else {
        result.winner = opponent(mover);
        for (int i = 0; i < b; ++i) result.optimal_moves.push_back(i);
    }
    return result;
}

bool is_correct_exact(const MoveDecision& decision, const ExactResult& exact)
{
    return std::find(exact.optimal_moves.begin(), exact.optimal_moves.end(), decision.chosen_index) !=
           exact.optimal_moves.end();
}

bool is_correct_exact(const MoveDecision& decision, const BoardView& view, Player mover)
{
    if (mover != view.mover()) throw std::invalid_argument("mover does not match the view's ply");
    return is_correct_exact(decision, exact_solve(view));
}

std::vector<std::optional<TrapKind>> children_traps(const BoardView& view, DiagonalRule rule)
{
    std::vector<std::optional<TrapKind>> traps;
    if (view.is_terminal()) return traps;
    const int b = view.root->branching();
    traps.reserve(b);
    for (int i = 0; i < b; ++i) traps.push_back(detect_trap(view.child(i), rule));
    return traps;
}

bool is_correct_trapwise(const MoveDecision& decision, std::span<const std::optional<TrapKind>> children, Player mover)
{
    const auto good = [mover](const std::optional<TrapKind>& t) { return t && favors(*t, mover); };
    if (std::none_of(children.begin(), children.end(), good)) return true;
    const auto i = static_cast<std::size_t>(decision.chosen_index);
    return i < children.size() && good(children[i]);
}

}  // namespace boardsplit
