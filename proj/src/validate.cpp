#include "boardsplit/validate.hpp"

#include <fmt/format.h>

#include <cmath>

#include <json.hpp>

#include "boardsplit/analysis.hpp"
#include "boardsplit/experiments.hpp"
#include "boardsplit/rng.hpp"
#include "boardsplit/search.hpp"

namespace boardsplit::validation {

namespace an = boardsplit::analysis;

std::optional<Suite> parse_suite(std::string_view name)
{
    if (name == "formulas") return Suite::Formulas;
    if (name == "mc") return Suite::MonteCarlo;
    if (name == "oracle") return Suite::Oracle;
    return std::nullopt;
}

const char* to_string(Suite suite)
{
    switch (suite) {
    case Suite::Formulas: return "formulas";
    case Suite::MonteCarlo: return "mc";
    case Suite::Oracle: return "oracle";
    }
    return "?";
}

bool Report::passed() const
{
    for (const auto& c : checks)
        if (c.status == Status::Fail) return false;
    return true;
}

std::string Report::to_json() const
{
    nlohmann::ordered_json j;
    j["suite"] = validation::to_string(suite);
    j["passed"] = passed();
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        const char* status = c.status == Status::Pass ? "pass" : c.status == Status::Fail ? "fail" : "info";
        j["checks"].push_back({{"name", c.name}, {"status", status}, {"detail", c.detail}});
    }
    return j.dump(2);
}

double pr_r_errs_sum(int branching, double trap_p)
{
    double sum = 0.0;
    double choose = 1.0;
    for (int i = 1; i <= branching - 1; ++i) {
        choose = choose * (branching - i + 1) / i;
        sum += (static_cast<double>(branching - i) / branching) * choose * std::pow(trap_p, i) *
               std::pow(1.0 - trap_p, branching - i);
    }
    return sum;
}

PlantedPosition plant_trap(const GameConfig& config, TrapKind kind, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    const int side = config.side();
    const int b = config.branching();
    PlantedPosition pos;
    pos.cells.resize(static_cast<std::size_t>(side) * side);
    for (auto& c : pos.cells) c = rng.bernoulli(config.p()) ? 1 : 0;

    int ply = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.total_plies()) + 1));
    if (kind == TrapKind::HDiagOnes) ply &= ~1;
    int r0 = 0, rows = side, c0 = 0, cols = side;
    for (int t = 0; t < ply; ++t) {
        const int i = static_cast<int>(rng.below(b));
        if (t % 2 == 0) {
            cols /= b;
            c0 += i * cols;
        } else {
            rows /= b;
            r0 += i * rows;
        }
    }
    auto at = [&](int r, int c) -> std::uint8_t& { return pos.cells[static_cast<std::size_t>(r) * side + c]; };
    switch (kind) {
    case TrapKind::HRowOnes: {
        const int r = r0 + static_cast<int>(rng.below(rows));
        for (int c = c0; c < c0 + cols; ++c) at(r, c) = 1;
        break;
    }
    case TrapKind::VColZeros: {
        const int c = c0 + static_cast<int>(rng.below(cols));
        for (int r = r0; r < r0 + rows; ++r) at(r, c) = 0;
        break;
    }
    case TrapKind::HDiagOnes: {
        const bool anti = rng.below(2) == 1;
        for (int i = 0; i < rows; ++i) at(r0 + i, anti ? c0 + cols - 1 - i : c0 + i) = 1;
        break;
    }
    }
    pos.ply = ply;
    pos.row_start = r0;
    pos.row_count = rows;
    pos.col_start = c0;
    pos.col_count = cols;
    return pos;
}

SoundnessTally trap_soundness(const GameConfig& config, TrapKind kind, int count, std::uint64_t seed)
{
    SoundnessTally tally;
    const Player beneficiary = kind == TrapKind::VColZeros ? Player::Vertical : Player::Horizontal;
    for (int i = 0; i < count; ++i) {
        const auto pos = plant_trap(config, kind, derive_seed(seed, static_cast<std::uint64_t>(i)));
        const RootBoard board(config.branching(), config.depth(), pos.cells);
        const BoardView view{&board, pos.row_start, pos.row_count, pos.col_start, pos.col_count, pos.ply};
        ++tally.positions;
        const auto trap = detect_trap(view, DiagonalRule::Both);
        if (trap && favors(*trap, beneficiary)) ++tally.detected;
        if (exact_solve(view).winner == beneficiary) ++tally.sound;
    }
    return tally;
}

OracleTally full_depth_agreement(const GameConfig& config, int games, std::uint64_t seed)
{
    OracleTally tally;
    const SearchOptions full{true, false};
    for (int g = 0; g < games; ++g) {
        const RootBoard board = generate_board(config, board_seed(seed, static_cast<std::uint64_t>(g)));
        BoardView view = BoardView::whole(board);
        ++tally.games;
        while (!view.is_terminal()) {
            const auto d = choose_move(view, config.total_plies(), EvaluatorKind::CountOnes, config, TipStream(), full);
            ++tally.decisions;
            if (is_correct_exact(d, exact_solve(view))) ++tally.agreements;
            view = view.child(d.chosen_index);
        }
    }
    return tally;
}

namespace {

void add(Report& r, std::string name, bool ok, std::string detail)
{
    r.checks.push_back({std::move(name), ok ? Status::Pass : Status::Fail, std::move(detail)});
}

void info(Report& r, std::string name, std::string detail)
{
    r.checks.push_back({std::move(name), Status::Info, std::move(detail)});
}

void formulas(Report& r)
{
    double worst = 0.0;
    bool decreasing = true;
    for (int b = 1; b <= 10; ++b) {
        const double p = an::fair_p(b);
        worst = std::max(worst, std::abs(std::pow(1.0 - p, b) - p));
        if (b > 1 && !(p < an::fair_p(b - 1))) decreasing = false;
    }
    add(r, "fair_p_residual", worst < 1e-12 && decreasing,
        fmt::format("max |(1-p)^B - p| = {:.3e} over B=1..10, strictly decreasing: {}", worst, decreasing));

    const double golden = (3.0 - std::sqrt(5.0)) / 2.0;
    const double err2 = std::abs(an::fair_p(2) - golden);
    add(r, "fair_p_b2_closed_form", err2 < 1e-10, fmt::format("|fair_p(2) - (3-sqrt5)/2| = {:.3e}", err2));

    double identity = 0.0;
    for (int b = 2; b <= 6; ++b)
        for (int i = 0; i <= 10; ++i) {
            const double P = i / 10.0;
            identity = std::max(identity, std::abs(an::pr_r_errs(b, P) - pr_r_errs_sum(b, P)));
        }
    add(r, "pr_r_errs_identity", identity < 1e-12,
        fmt::format("max |closed - sum| = {:.3e} over B=2..6, P=0..1 step 0.1", identity));

    double norm = 0.0;
    for (int b = 2; b <= 8; ++b)
        for (int i = 0; i <= 20; ++i) {
            double s = 0.0;
            for (int t = 0; t <= b; ++t) s += an::pr_i_traps(b, i / 20.0, t);
            norm = std::max(norm, std::abs(s - 1.0));
        }
    add(r, "pr_i_traps_normalization", norm < 1e-12, fmt::format("max |sum_i Pr[I] - 1| = {:.3e}", norm));

    int out_of_range = 0;
    int swept = 0;
    for (int b = 2; b <= 6; ++b)
        for (int s = 1; s <= 6; ++s)
            for (int i = 0; i <= 50; ++i) {
                const double p = i / 100.0;
                const double P = an::trap_prob(s, p);
                for (double v : {P, an::pr_ntn(s, p, b), an::pr_n_errs(s, p, b), an::pr_r_errs(b, P),
                                 an::propagate_to_root(an::pr_r_errs(b, P), b, 4).root()}) {
                    ++swept;
                    if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) ++out_of_range;
                }
            }
    add(r, "probability_range", out_of_range == 0,
        fmt::format("{} of {} outputs outside [0,1] for B=2..6, S=1..6, p in [0, 0.5]", out_of_range, swept));

    int high = 0;
    double lowest = 1.0;
    for (int b = 2; b <= 6; ++b)
        for (int s = 1; s <= 6; ++s)
            for (int i = 51; i <= 100; ++i) {
                const double v = an::pr_ntn(s, i / 100.0, b);
                if (v < 0.0 || v > 1.0) ++high;
                lowest = std::min(lowest, v);
            }
    info(r, "pr_ntn_above_half",
         fmt::format("printed Pr[NTN] leaves [0,1] at {} grid points with p > 0.5 (min {:.4f}); not clamped", high,
                     lowest));

    bool boundaries = true;
    for (int b = 2; b <= 5; ++b) {
        boundaries &= std::pow(1.0, b) == 1.0 && an::pr_r_errs(b, 1.0) == 0.0;
        for (int k = 0; k <= 8; k += 2) {
            for (const auto& l : an::propagate_to_root(0.0, b, k).levels) boundaries &= l.error == 0.0;
            const auto ones = an::propagate_to_root(1.0, b, k).levels;
            for (std::size_t i = 0; i < ones.size(); ++i) boundaries &= ones[i].error == (i < 2 ? 1.0 : 0.0);
        }
    }
    add(r, "propagation_boundaries", boundaries, "P_tip = 0 stays 0; P_tip = 1 maps to 1 through a min step and 0 through a max step");

    const double p3 = an::fair_p(3);
    const std::vector<int> ks{2, 4, 6, 8};
    const auto curve = an::p0_curve(3, 6, p3, ks);
    const auto growth = an::check_growth(curve);
    std::string pts;
    for (const auto& c : curve) pts += fmt::format(" k={}:{:.6e}", c.lookahead, c.p0);
    info(r, "p0_growth_b3_d6",
         fmt::format("P0{}; {}", pts,
                     growth.nondecreasing ? (growth.strictly_increasing ? "grows monotonically" : "nondecreasing")
                                          : fmt::format("NOT monotone: {} decrease(s)", growth.decreases.size())));
}

void monte_carlo(Report& r, std::uint64_t seed)
{
    const double p3 = an::fair_p(3);
    int combos = 0;
    int within = 0;
    double worst = 0.0;
    for (int s = 1; s <= 4; ++s)
        for (double p : {0.1, p3, 0.5}) {
            const double exact = an::trap_prob(s, p);
            const auto mc = an::mc_trap_prob(s, p, 100000, derive_seed(seed, 100 + combos));
            const double sigma = std::sqrt(exact * (1.0 - exact) / 100000.0);
            const double z = sigma > 0 ? std::abs(*mc.estimate - exact) / sigma : 0.0;
            worst = std::max(worst, z);
            ++combos;
            if (z <= 3.0) ++within;
        }
    add(r, "trap_prob_mc", within == combos,
        fmt::format("{}/{} within 3 sigma (10^5 trials each), worst |z| = {:.2f}", within, combos, worst));

    int k0_ok = 0;
    int k0_total = 0;
    double k0_worst = 0.0;
    for (int b : {2, 3, 5})
        for (double P : {0.1, 0.1875, 0.5}) {
            const double exact = an::propagate_to_root(an::pr_r_errs(b, P), b, 0).root();
            const auto mc = an::mc_propagation(b, P, 0, 200000, derive_seed(seed, 200 + k0_total));
            const double sigma = std::sqrt(exact * (1.0 - exact) / 200000.0);
            const double z = std::abs(*mc.estimate - exact) / sigma;
            k0_worst = std::max(k0_worst, z);
            ++k0_total;
            if (z <= 4.0) ++k0_ok;
        }
    add(r, "propagation_k0_mc", k0_ok == k0_total,
        fmt::format("{}/{} within 4 sigma, worst |z| = {:.2f}", k0_ok, k0_total, k0_worst));

    {
        // The simulator's input is the tip trap probability, so its target is the
        // recurrence started from pr_r_errs(P), not from P itself.
        const double trap = 0.1875;
        const double exact = an::propagate_to_root(an::pr_r_errs(2, trap), 2, 2).root();
        const double literal = an::propagate_to_root(trap, 2, 2).root();
        const auto mc = an::mc_propagation(2, trap, 2, 1000000, derive_seed(seed, 300));
        const double sigma = std::sqrt(exact * (1.0 - exact) / 1e6);
        const double z = (*mc.estimate - exact) / sigma;
        add(r, "propagation_k2_mc", std::abs(z) <= 4.0,
            fmt::format("B=2 P=0.1875 k=2: recurrence from pr_r_errs(P) {:.10f}, MC {:.6f} +/- {:.6f}, z = {:.2f}",
                        exact, *mc.estimate, mc.std_error, z));
        info(r, "propagation_k2_literal",
             fmt::format("recurrence started at P_tip = P itself gives {:.10f}; MC differs by {:+.6f} because the "
                         "simulated tips are trap marks, one max step below P_tip",
                         literal, *mc.estimate - literal));
    }

    for (auto [s, b, p] : {std::tuple{2, 2, 0.5}, std::tuple{2, 2, 0.4}, std::tuple{3, 3, p3}}) {
        const double formula = an::pr_ntn(s, p, b);
        const auto mc = an::mc_ntn(s, p, b, 100000, derive_seed(seed, 400 + s * 10 + b));
        std::string est = mc.estimate ? fmt::format("{:.4f} +/- {:.4f}", *mc.estimate, mc.std_error) : "undefined";
        info(r, fmt::format("pr_ntn_vs_mc_S{}_B{}_p{:.3f}", s, b, p),
             fmt::format("formula {:.6f}, MC {} (support {}, tie rate {:.4f}), difference {}", formula, est, mc.support,
                         mc.tie_rate, mc.estimate ? fmt::format("{:+.4f}", formula - *mc.estimate) : "n/a"));
    }
}

void oracle(Report& r, std::uint64_t seed)
{
    const double p2 = an::fair_p(2);
    const double p3 = an::fair_p(3);
    for (auto [b, d, games] : {std::tuple{2, 2, 200}, std::tuple{3, 3, 50}}) {
        const GameConfig cfg(b, d, b == 2 ? p2 : p3);
        const auto t = full_depth_agreement(cfg, games, derive_seed(seed, 500 + b));
        add(r, fmt::format("full_depth_vs_exact_B{}_D{}", b, d), t.agreements == t.decisions,
            fmt::format("{} games, {}/{} decisions in the exact optimal set", t.games, t.agreements, t.decisions));
    }
    for (auto [b, d] : {std::pair{2, 2}, std::pair{3, 3}}) {
        const GameConfig cfg(b, d, b == 2 ? p2 : p3);
        for (TrapKind kind : {TrapKind::HRowOnes, TrapKind::VColZeros, TrapKind::HDiagOnes}) {
            const auto t = trap_soundness(cfg, kind, 1000, derive_seed(seed, 600 + b * 10 + static_cast<int>(kind)));
            add(r, fmt::format("trap_soundness_{}_B{}", boardsplit::to_string(kind), b),
                t.sound == t.positions && t.detected == t.positions,
                fmt::format("{}/{} exact wins for the trap's side, {}/{} detected", t.sound, t.positions, t.detected,
                            t.positions));
        }
    }
    {
        const GameConfig cfg(3, 4, p3);
        int mismatches = 0;
        int compared = 0;
        for (int g = 0; g < 20; ++g) {
            const RootBoard board = generate_board(cfg, board_seed(seed, 700 + g));
            const BoardView root = BoardView::whole(board);
            for (auto ev : {EvaluatorKind::CountOnes, EvaluatorKind::TrapAware, EvaluatorKind::RandomTips})
                for (int k = 0; k <= 6; ++k) {
                    const TipStream stream(derive_seed(seed, g));
                    const auto plain = choose_move(root, k, ev, cfg, stream, {false, false});
                    const auto pruned = choose_move(root, k, ev, cfg, stream, {false, true});
                    ++compared;
                    if (plain.child_values != pruned.child_values || plain.chosen_index != pruned.chosen_index)
                        ++mismatches;
                }
        }
        add(r, "alpha_beta_equivalence", mismatches == 0,
            fmt::format("{} root decisions compared, {} mismatches", compared, mismatches));
    }
}

}  // namespace

Report run_suite(Suite suite, std::uint64_t seed)
{
    Report r{suite, {}};
    switch (suite) {
    case Suite::Formulas: formulas(r); break;
    case Suite::MonteCarlo: monte_carlo(r, seed); break;
    case Suite::Oracle: oracle(r, seed); break;
    }
    return r;
}

}  // namespace boardsplit::validation
