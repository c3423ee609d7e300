#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>

#include "boardsplit/analysis.hpp"
#include "boardsplit/experiments.hpp"
#include "boardsplit/search.hpp"
#include "test_util.hpp"

namespace boardsplit {
namespace {

using testing::board_from;
using testing::Grid;
using testing::grid_of;
using testing::naive_ones;

// Reference minimax on copied grids: split by slicing, count by summing.
Grid slice(const Grid& g, int ply, int b, int i)
{
    const int rows = static_cast<int>(g.size());
    const int cols = static_cast<int>(g[0].size());
    Grid out;
    if (ply % 2 == 0) {
        const int w = cols / b;
        for (const auto& r : g) out.emplace_back(r.begin() + i * w, r.begin() + (i + 1) * w);
    } else {
        const int h = rows / b;
        out.assign(g.begin() + i * h, g.begin() + (i + 1) * h);
    }
    return out;
}

std::int64_t naive_minimax(const Grid& g, int ply, int tip, int b)
{
    if (ply == tip) return naive_ones(g);
    std::int64_t best = ply % 2 == 1 ? std::numeric_limits<std::int64_t>::min() : std::numeric_limits<std::int64_t>::max();
    for (int i = 0; i < b; ++i) {
        const auto v = naive_minimax(slice(g, ply, b, i), ply + 1, tip, b);
        best = ply % 2 == 1 ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

// Leaf-enumerating solver over copied grids.
bool naive_h_wins(const Grid& g, int ply, int b)
{
    if (g.size() == 1 && g[0].size() == 1) return g[0][0] == 1;
    bool any = false;
    bool all = true;
    for (int i = 0; i < b; ++i) {
        const bool w = naive_h_wins(slice(g, ply, b, i), ply + 1, b);
        any |= w;
        all &= w;
    }
    return ply % 2 == 1 ? any : all;
}

BoardView random_view(const RootBoard& board, SplitMix64& rng, int max_ply)
{
    BoardView v = BoardView::whole(board);
    const int stop = static_cast<int>(rng.below(max_ply + 1));
    while (v.ply < stop) v = v.child(static_cast<int>(rng.below(board.branching())));
    return v;
}

TEST(TipLevel, Examples)
{
    const GameConfig d6(3, 6, 0.3);
    EXPECT_EQ(tip_level(1, 0, d6), 2);
    EXPECT_EQ(tip_level(1, 10, d6), 10);
    EXPECT_EQ(tip_level(10, 4, d6), 11);
    EXPECT_EQ(tip_level(0, 0, d6), 1);
    EXPECT_EQ(tip_level(11, 0, d6), 12);
    EXPECT_EQ(tip_level(1, 20, d6, true), 12);
}

TEST(TipLevel, NeverBeyondCutoffExceptForcedFinalRound)
{
    for (int d = 1; d <= 6; ++d) {
        const GameConfig c(2, d, 0.3);
        for (int t = 0; t < 2 * d; ++t)
            for (int k = 0; k <= 12; ++k) {
                const int tip = tip_level(t, k, c);
                EXPECT_GE(tip, t + 1);
                EXPECT_TRUE(tip <= c.cutoff_level() || tip == t + 1);
                EXPECT_LE(tip, t + 1 + k);
            }
    }
}

TEST(MinimaxValue, HandEnumeratedExamples)
{
    const GameConfig c(2, 1, 0.5);
    const RootBoard diag = board_from(2, 1, {{1, 0}, {0, 1}});
    EXPECT_EQ(minimax_value(BoardView::whole(diag), 2, EvaluatorKind::CountOnes, c, TipStream()), 1);

    // Each 2x1 column keeps a one-cell row of 1's on top, so both children are H traps.
    const RootBoard row = board_from(2, 1, {{1, 1}, {0, 0}});
    EXPECT_EQ(minimax_value(BoardView::whole(row), 1, EvaluatorKind::TrapAware, c, TipStream()), 4);
    EXPECT_EQ(minimax_value(BoardView::whole(row), 1, EvaluatorKind::CountOnes, c, TipStream()), 1);

    const BoardView v = BoardView::whole(row);
    EXPECT_EQ(minimax_value(v, 0, EvaluatorKind::CountOnes, c, TipStream()), count_ones(v));
    EXPECT_THROW(minimax_value(v.child(0), 0, EvaluatorKind::CountOnes, c, TipStream()), std::invalid_argument);
    EXPECT_THROW(minimax_value(v, 3, EvaluatorKind::CountOnes, c, TipStream()), std::invalid_argument);
}

TEST(MinimaxValue, MatchesGridOracleAndVisitBound)
{
    for (auto [b, d] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 3}}) {
        const GameConfig c(b, d, 0.45);
        for (std::uint64_t s = 0; s < 40; ++s) {
            const RootBoard board = generate_board(c, s);
            SplitMix64 rng(s + 1000);
            const BoardView v = random_view(board, rng, 2 * d);
            const Grid g = grid_of(v);
            for (int tip = v.ply; tip <= 2 * d; ++tip) {
                SearchStats stats;
                const Score got = minimax_value(v, tip, EvaluatorKind::CountOnes, c, TipStream(), {}, &stats);
                ASSERT_EQ(got, naive_minimax(g, v.ply, tip, b));
                ASSERT_EQ(stats.tips, static_cast<std::uint64_t>(std::pow(b, tip - v.ply)));
            }
        }
    }
}

TEST(MinimaxValue, ValueBounds)
{
    const GameConfig c(3, 3, analysis::fair_p(3));
    for (std::uint64_t s = 0; s < 30; ++s) {
        const RootBoard board = generate_board(c, s);
        const BoardView root = BoardView::whole(board);
        for (int tip = 0; tip <= 6; ++tip) {
            const Score y = minimax_value(root, tip, EvaluatorKind::TrapAware, c, TipStream());
            EXPECT_LE(std::abs(y), c.trap_magnitude());
            const Score n = minimax_value(root, tip, EvaluatorKind::CountOnes, c, TipStream());
            const auto tip_area = BoardView::whole(board).area() / static_cast<std::int64_t>(std::pow(3, tip));
            EXPECT_GE(n, 0);
            EXPECT_LE(n, tip_area);
        }
    }
}

TEST(ChooseMove, Examples)
{
    const GameConfig c(2, 1, 0.5);
    const RootBoard diag = board_from(2, 1, {{1, 0}, {0, 1}});
    const auto d = choose_move(BoardView::whole(diag), 0, EvaluatorKind::CountOnes, c, TipStream());
    EXPECT_EQ(d.chosen_index, 0);
    EXPECT_EQ(d.child_values, (std::vector<Score>{1, 1}));
    EXPECT_EQ(d.tie_count, 2);
    EXPECT_EQ(d.backed_value, 1);

    const GameConfig c3(3, 3, 0.0);
    const RootBoard zero = generate_board(c3, 0);
    for (int k : {0, 2, 5}) {
        const auto z = choose_move(BoardView::whole(zero), k, EvaluatorKind::CountOnes, c3, TipStream());
        EXPECT_EQ(z.chosen_index, 0);
        EXPECT_EQ(z.child_values, (std::vector<Score>{0, 0, 0}));
    }

    const BoardView leaf = BoardView::whole(diag).child(0).child(0);
    EXPECT_THROW(choose_move(leaf, 0, EvaluatorKind::CountOnes, c, TipStream()), std::invalid_argument);
}

TEST(ChooseMove, HorizontalTakesRowTrapUnderTrapAware)
{
    // 4x4 board; V keeps column block 0 (4x2). Its lower half holds a row of 1's,
    // the upper half a column of 0's.
    const RootBoard b = board_from(2, 2, {{1, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 0, 0}});
    const GameConfig c(2, 2, 0.5);
    const BoardView h_to_move = BoardView::whole(b).child(0);
    for (int k = 0; k <= 3; ++k) {
        const auto d = choose_move(h_to_move, k, EvaluatorKind::TrapAware, c, TipStream());
        EXPECT_EQ(d.chosen_index, 1) << "k=" << k;
    }
    // Under CountOnes both halves count 2 and the tie goes to the top half.
    EXPECT_EQ(choose_move(h_to_move, 0, EvaluatorKind::CountOnes, c, TipStream()).chosen_index, 0);
}

TEST(ChooseMove, BackedValueIsMinOrMaxWithLowestIndex)
{
    const GameConfig c(3, 4, analysis::fair_p(3));
    for (std::uint64_t s = 0; s < 20; ++s) {
        const RootBoard board = generate_board(c, s);
        SplitMix64 rng(s);
        const BoardView v = random_view(board, rng, 7);
        for (auto ev : {EvaluatorKind::CountOnes, EvaluatorKind::TrapAware, EvaluatorKind::RandomTips}) {
            const auto d = choose_move(v, 2, ev, c, TipStream(s));
            const bool maximize = v.mover() == Player::Horizontal;
            const auto best = maximize ? *std::max_element(d.child_values.begin(), d.child_values.end())
                                       : *std::min_element(d.child_values.begin(), d.child_values.end());
            EXPECT_EQ(d.backed_value, best);
            EXPECT_EQ(d.child_values[d.chosen_index], best);
            for (int i = 0; i < d.chosen_index; ++i) EXPECT_NE(d.child_values[i], best);
            EXPECT_EQ(d.tie_count, std::count(d.child_values.begin(), d.child_values.end(), best));
        }
    }
}

TEST(ChooseMove, DeterministicForSameInputs)
{
    const GameConfig c(3, 4, analysis::fair_p(3));
    const RootBoard board = generate_board(c, 9);
    const BoardView v = BoardView::whole(board).child(1);
    for (auto ev : {EvaluatorKind::CountOnes, EvaluatorKind::TrapAware, EvaluatorKind::RandomTips}) {
        const auto a = choose_move(v, 3, ev, c, TipStream(77));
        const auto b = choose_move(v, 3, ev, c, TipStream(77));
        EXPECT_EQ(a.chosen_index, b.chosen_index);
        EXPECT_EQ(a.child_values, b.child_values);
    }
    // Different streams give different random tips.
    const auto r1 = choose_move(v, 3, EvaluatorKind::RandomTips, c, TipStream(1));
    const auto r2 = choose_move(v, 3, EvaluatorKind::RandomTips, c, TipStream(2));
    EXPECT_NE(r1.child_values, r2.child_values);
}

TEST(ChooseMove, RandomTipsAtZeroLookaheadPicksChildrenUniformly)
{
    const GameConfig c(3, 3, 0.5);
    const RootBoard board = generate_board(c, 1);
    const BoardView v = BoardView::whole(board);
    std::array<int, 3> counts{};
    const int n = 30000;
    for (int s = 0; s < n; ++s) ++counts[choose_move(v, 0, EvaluatorKind::RandomTips, c, TipStream(s)).chosen_index];
    for (int x : counts) EXPECT_NEAR(x / double(n), 1.0 / 3, 4 * std::sqrt((2.0 / 9) / n));
}

TEST(ChooseMove, AlphaBetaLeavesRootChildValuesUnchanged)
{
    const GameConfig c(3, 4, analysis::fair_p(3));
    for (std::uint64_t s = 0; s < 15; ++s) {
        const RootBoard board = generate_board(c, s);
        SplitMix64 rng(s);
        const BoardView v = random_view(board, rng, 5);
        for (auto ev : {EvaluatorKind::CountOnes, EvaluatorKind::TrapAware, EvaluatorKind::RandomTips})
            for (int k = 0; k <= 6; ++k) {
                SearchStats plain_stats;
                SearchStats ab_stats;
                const auto plain = choose_move(v, k, ev, c, TipStream(s), {false, false}, &plain_stats);
                const auto ab = choose_move(v, k, ev, c, TipStream(s), {false, true}, &ab_stats);
                ASSERT_EQ(plain.child_values, ab.child_values);
                ASSERT_EQ(plain.chosen_index, ab.chosen_index);
                ASSERT_LE(ab_stats.nodes, plain_stats.nodes);
            }
    }
}

TEST(ExactSolve, Examples)
{
    const RootBoard diag = board_from(2, 1, {{1, 0}, {0, 1}});
    const BoardView root = BoardView::whole(diag);
    const ExactResult r = exact_solve(root);
    EXPECT_EQ(r.winner, Player::Horizontal);
    EXPECT_EQ(r.optimal_moves, (std::vector<int>{0, 1}));

    const BoardView leaf = root.child(0).child(0);
    EXPECT_EQ(exact_solve(leaf).winner, Player::Horizontal);
    EXPECT_TRUE(exact_solve(leaf).optimal_moves.empty());

    const RootBoard zero = generate_board(GameConfig(2, 1, 0.0), 0);
    EXPECT_EQ(exact_solve(BoardView::whole(zero)).winner, Player::Vertical);

    // Exactly one 1: V must keep the all-zero column.
    const RootBoard single = board_from(2, 1, {{0, 1}, {0, 0}});
    const ExactResult s = exact_solve(BoardView::whole(single));
    EXPECT_EQ(s.winner, Player::Vertical);
    EXPECT_EQ(s.optimal_moves, (std::vector<int>{0}));
}

TEST(ExactSolve, MatchesLeafEnumerationAndOptimalSetInvariant)
{
    for (auto [b, d] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
        const GameConfig c(b, d, 0.45);
        for (std::uint64_t s = 0; s < 60; ++s) {
            const RootBoard board = generate_board(c, s);
            SplitMix64 rng(s);
            const BoardView v = random_view(board, rng, 2 * d - 1);
            const ExactResult r = exact_solve(v);
            ASSERT_EQ(r.winner == Player::Horizontal, naive_h_wins(grid_of(v), v.ply, b));
            ASSERT_FALSE(r.optimal_moves.empty());
            for (int m = 0; m < b; ++m) {
                const bool listed = std::find(r.optimal_moves.begin(), r.optimal_moves.end(), m) != r.optimal_moves.end();
                const Player child = horizontal_wins(v.child(m)) ? Player::Horizontal : Player::Vertical;
                if (r.winner == v.mover()) {
                    ASSERT_EQ(listed, child == v.mover());
                } else {
                    ASSERT_TRUE(listed);
                }
            }
        }
    }
}

TEST(Correctness, ExactCriterion)
{
    const GameConfig c(2, 1, 0.5);
    const RootBoard single = board_from(2, 1, {{0, 1}, {0, 0}});
    const BoardView v = BoardView::whole(single);
    MoveDecision picks_one;
    picks_one.chosen_index = 1;
    EXPECT_FALSE(is_correct_exact(picks_one, v, Player::Vertical));
    MoveDecision picks_zero;
    picks_zero.chosen_index = 0;
    EXPECT_TRUE(is_correct_exact(picks_zero, v, Player::Vertical));
    EXPECT_THROW(is_correct_exact(picks_zero, v, Player::Horizontal), std::invalid_argument);

    // H choosing a child whose exact winner is H.
    const RootBoard b = board_from(2, 1, {{0, 0}, {1, 0}});
    const BoardView h = BoardView::whole(b).child(0);
    MoveDecision bottom;
    bottom.chosen_index = 1;
    EXPECT_TRUE(is_correct_exact(bottom, h, Player::Horizontal));
}

TEST(Correctness, FullDepthSearchAgreesWithExactSolver)
{
    for (auto [b, d, games] : {std::tuple{2, 2, 200}, std::tuple{3, 3, 50}}) {
        const GameConfig c(b, d, analysis::fair_p(b));
        for (int g = 0; g < games; ++g) {
            const RootBoard board = generate_board(c, 5000 + g);
            BoardView v = BoardView::whole(board);
            while (!v.is_terminal()) {
                for (auto ev : {EvaluatorKind::CountOnes, EvaluatorKind::TrapAware}) {
                    const auto dec = choose_move(v, 2 * d, ev, c, TipStream(), {true, false});
                    ASSERT_TRUE(is_correct_exact(dec, v, v.mover()));
                    ASSERT_EQ(tip_level(v.ply, 2 * d, c, true), 2 * d);
                }
                const auto dec = choose_move(v, 2 * d, EvaluatorKind::CountOnes, c, TipStream(), {true, false});
                v = v.child(dec.chosen_index);
            }
        }
    }
}

TEST(Correctness, TrapwiseCriterion)
{
    const std::vector<std::optional<TrapKind>> none(3);
    MoveDecision d;
    d.chosen_index = 2;
    EXPECT_TRUE(is_correct_trapwise(d, none, Player::Horizontal));

    const std::vector<std::optional<TrapKind>> row{TrapKind::HRowOnes, std::nullopt, std::nullopt};
    d.chosen_index = 1;
    EXPECT_FALSE(is_correct_trapwise(d, row, Player::Horizontal));
    // A row trap is not V's trap, so V skipping it is fine.
    EXPECT_TRUE(is_correct_trapwise(d, row, Player::Vertical));

    const std::vector<std::optional<TrapKind>> diag{std::nullopt, TrapKind::HDiagOnes, TrapKind::HRowOnes};
    EXPECT_TRUE(is_correct_trapwise(d, diag, Player::Horizontal));

    const std::vector<std::optional<TrapKind>> col{std::nullopt, std::nullopt, TrapKind::VColZeros};
    EXPECT_FALSE(is_correct_trapwise(d, col, Player::Vertical));
    d.chosen_index = 2;
    EXPECT_TRUE(is_correct_trapwise(d, col, Player::Vertical));
}

TEST(Correctness, TrapAwareAlwaysTakesFavorableTrapAtZeroLookahead)
{
    int with_trap = 0;
    for (auto [b, d] : {std::pair{2, 3}, std::pair{3, 3}, std::pair{3, 4}}) {
        const GameConfig c(b, d, analysis::fair_p(b));
        for (std::uint64_t s = 0; s < 300; ++s) {
            const RootBoard board = generate_board(c.with_p(0.25 + 0.5 * (s % 3) / 2.0), s);
            SplitMix64 rng(s);
            const BoardView v = random_view(board, rng, 2 * d - 1);
            const auto traps = children_traps(v);
            const auto dec = choose_move(v, 0, EvaluatorKind::TrapAware, c, TipStream());
            const bool available = std::any_of(traps.begin(), traps.end(),
                                               [&](auto t) { return t && favors(*t, v.mover()); });
            with_trap += available;
            ASSERT_TRUE(is_correct_trapwise(dec, traps, v.mover()));
        }
    }
    EXPECT_GT(with_trap, 100);
}

}  // namespace
}  // namespace boardsplit
