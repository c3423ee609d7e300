#include "boardsplit/analysis.hpp"

#include <cmath>
#include <limits>

#include "boardsplit/config.hpp"
#include "boardsplit/parallel.hpp"
#include "boardsplit/rng.hpp"

namespace boardsplit::analysis {

namespace {

// n * log(x) with the 0 * log(0) = 0 convention.
double xlog(double n, double x) { return n == 0.0 ? 0.0 : n * std::log(x); }
double xlog1m(double n, double x) { return n == 0.0 ? 0.0 : n * std::log1p(-x); }

double log_choose(int n, int k)
{
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_pmf(int n, int k, double p)
{
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    return std::exp(log_choose(n, k) + xlog(k, p) + xlog1m(n - k, p));
}

int int_pow(int base, int exp)
{
    const int v = checked_side(base, exp);
    if (v < 0) throw ParameterError("side B^e is too large");
    return v;
}

constexpr std::int64_t kChunk = 4096;

struct Tally {
    std::int64_t hits = 0;
    std::int64_t support = 0;
    std::int64_t ties = 0;
};

// Splits trials into fixed-size chunks with their own derived seeds so the
// total is independent of worker count and scheduling.
template <class Trial>
Tally run_chunks(std::int64_t trials, std::uint64_t seed, Trial&& trial)
{
    const auto chunks = static_cast<std::size_t>((trials + kChunk - 1) / kChunk);
    std::vector<Tally> parts(chunks);
    parallel_for(chunks, 0, [&](std::size_t c) {
        SplitMix64 rng(derive_seed(seed, c));
        const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
        const std::int64_t end = std::min(trials, begin + kChunk);
        for (std::int64_t t = begin; t < end; ++t) trial(rng, parts[c]);
    });
    Tally total;
    for (const auto& p : parts) {
        total.hits += p.hits;
        total.support += p.support;
        total.ties += p.ties;
    }
    return total;
}

McEstimate to_estimate(const Tally& t, std::int64_t trials)
{
    McEstimate e;
    e.trials = trials;
    e.support = t.support;
    if (t.support > 0) {
        const double f = static_cast<double>(t.hits) / static_cast<double>(t.support);
        e.estimate = f;
        e.std_error = std::sqrt(f * (1.0 - f) / static_cast<double>(t.support));
        e.tie_rate = static_cast<double>(t.ties) / static_cast<double>(t.support);
    }
    return e;
}

void require_trials(std::int64_t trials)
{
    if (trials < 1) throw ParameterError("trials must be at least 1");
}

}  // namespace

double fair_p(int branching)
{
    if (branching < 1) throw ParameterError("branching must be at least 1");
    const auto f = [branching](double x) { return std::pow(1.0 - x, branching) - x; };
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double v = f(mid);
        if (v == 0.0) return mid;
        (v > 0.0 ? lo : hi) = mid;
    }
    return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

int model_side(const AnalysisParams& params)
{
    if (params.lookahead < 0 || params.lookahead % 2 != 0) throw ParameterError("lookahead k must be even and >= 0");
    const int exponent = params.depth - params.lookahead / 2 - 1;
    if (exponent < 0) throw ParameterError("D - k/2 - 1 is negative; k exceeds 2(D-1)");
    return int_pow(params.branching, exponent);
}

int geometric_side(const AnalysisParams& params)
{
    if (params.lookahead < 0 || params.lookahead % 2 != 0) throw ParameterError("lookahead k must be even and >= 0");
    const int exponent = params.depth - params.lookahead / 2;
    if (exponent < 0) throw ParameterError("D - k/2 is negative");
    return int_pow(params.branching, exponent);
}

double trap_prob(int side, double p)
{
    if (side < 1) throw ParameterError("side must be at least 1");
    // 1 - (1 - p^S)^S without cancellation when p^S is tiny.
    return -std::expm1(side * std::log1p(-std::pow(p, side)));
}

double pr_i_traps(int branching, double trap_p, int i)
{
    if (i < 0 || i > branching) throw ParameterError("trap count i must lie in [0, B]");
    return binomial_pmf(branching, i, trap_p);
}

double pr_ntn(int side, double p, int branching)
{
    if (side < 1) throw ParameterError("side must be at least 1");
    const int cells = side * side;
    // below[z] = sum_{j=1}^{z} C(S^2, j) p^j (1-p)^{S^2-j}
    std::vector<double> below(static_cast<std::size_t>(cells) + 1, 0.0);
    for (int j = 1; j <= cells; ++j) below[j] = below[j - 1] + binomial_pmf(cells, j, p);

    const double log_b = std::log(static_cast<double>(branching));
    double total = 0.0;
    for (int z = side; z <= cells; ++z) {
        if (below[z] <= 0.0) continue;
        const double log_term = log_choose(side * (side - 1), z - side) + log_b + xlog(z, p) +
                                xlog1m(cells - z, p) + xlog(branching - 1, below[z]);
        total += std::exp(log_term);
    }
    return 1.0 - total;
}

double pr_n_errs(int side, double p, int branching)
{
    const double trap = trap_prob(side, p);
    double some = 0.0;
    for (int i = 1; i <= branching - 1; ++i) some += pr_i_traps(branching, trap, i);
    return pr_ntn(side, p, branching) * some;
}

double pr_r_errs(int branching, double trap_p)
{
    // (1 - P) - (1 - P)^B = (1 - P)(1 - (1 - P)^{B-1}); the product form stays
    // accurate when P is far below machine epsilon.
    if (trap_p >= 1.0 || branching <= 1) return 0.0;
    return (1.0 - trap_p) * -std::expm1((branching - 1) * std::log1p(-trap_p));
}

PropagationTrace propagate_to_root(double tip_error, int branching, int lookahead)
{
    if (lookahead < 0 || lookahead % 2 != 0) throw ParameterError("lookahead k must be even and >= 0");
    PropagationTrace trace;
    trace.levels.push_back({lookahead, tip_error});
    double x = tip_error;
    for (int level = lookahead - 1; level >= 0; --level) {
        x = level % 2 == 1 ? std::pow(x, branching) : pr_r_errs(branching, x);
        trace.levels.push_back({level, x});
    }
    return trace;
}

std::vector<CurvePoint> p0_curve(int branching, int depth, double p, std::span<const int> lookaheads)
{
    std::vector<CurvePoint> curve;
    curve.reserve(lookaheads.size());
    for (int k : lookaheads) {
        CurvePoint pt;
        pt.lookahead = k;
        pt.side = model_side({branching, depth, p, k});
        pt.trap_p = trap_prob(pt.side, p);
        pt.tip_error = pr_r_errs(branching, pt.trap_p);
        pt.p0 = propagate_to_root(pt.tip_error, branching, k).root();
        curve.push_back(pt);
    }
    return curve;
}

GrowthCheck check_growth(std::span<const CurvePoint> curve)
{
    GrowthCheck g{true, true, {}};
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (curve[i].p0 < curve[i - 1].p0) {
            g.nondecreasing = false;
            g.decreases.emplace_back(curve[i - 1].lookahead, curve[i].lookahead);
        }
        if (!(curve[i].p0 > curve[i - 1].p0)) g.strictly_increasing = false;
    }
    return g;
}

McEstimate mc_trap_prob(int side, double p, std::int64_t trials, std::uint64_t seed)
{
    require_trials(trials);
    if (side < 1) throw ParameterError("side must be at least 1");
    const Tally t = run_chunks(trials, seed, [&](SplitMix64& rng, Tally& tally) {
        bool trap = false;
        for (int r = 0; r < side; ++r) {
            bool full = true;
            for (int c = 0; c < side; ++c) full &= rng.bernoulli(p);
            trap |= full;
        }
        ++tally.support;
        if (trap) ++tally.hits;
    });
    return to_estimate(t, trials);
}

McEstimate mc_ntn(int side, double p, int branching, std::int64_t trials, std::uint64_t seed)
{
    require_trials(trials);
    if (side < 1 || branching < 2) throw ParameterError("need side >= 1 and B >= 2");
    const Tally t = run_chunks(trials, seed, [&](SplitMix64& rng, Tally& tally) {
        int best = -1;
        int best_count = 0;
        bool best_is_trap = false;
        bool any_trap = false;
        for (int b = 0; b < branching; ++b) {
            int ones = 0;
            bool trap = false;
            for (int r = 0; r < side; ++r) {
                int row = 0;
                for (int c = 0; c < side; ++c) row += rng.bernoulli(p) ? 1 : 0;
                ones += row;
                trap |= row == side;
            }
            any_trap |= trap;
            if (ones > best) {
                best = ones;
                best_count = 1;
                best_is_trap = trap;
            } else if (ones == best) {
                ++best_count;
            }
        }
        if (!any_trap) return;
        ++tally.support;
        if (best_count > 1) {
            ++tally.ties;
        } else if (!best_is_trap) {
            ++tally.hits;
        }
    });
    return to_estimate(t, trials);
}

namespace {

bool max_step(int branching, int good)
{
    return good >= 1 && good < branching;
}

struct PropagationTree {
    int branching;
    double trap_p;
    int lookahead;

    bool errs(SplitMix64& rng, int level) const
    {
        if (level % 2 == 1) {
            bool all = true;
            for (int i = 0; i < branching; ++i) all &= errs(rng, level + 1);
            return all;
        }
        // Max node: record which children are good, then choose one uniformly.
        std::uint64_t good_mask = 0;
        int good = 0;
        for (int i = 0; i < branching; ++i) {
            const bool g = level == lookahead ? rng.bernoulli(trap_p) : !errs(rng, level + 1);
            if (g) {
                good_mask |= std::uint64_t{1} << i;
                ++good;
            }
        }
        const auto pick = rng.below(static_cast<std::uint64_t>(branching));
        if (!max_step(branching, good)) return false;
        return ((good_mask >> pick) & 1U) == 0;
    }
};

}  // namespace

McEstimate mc_propagation(int branching, double trap_p, int lookahead, std::int64_t trials, std::uint64_t seed)
{
    require_trials(trials);
    if (lookahead < 0 || lookahead % 2 != 0) throw ParameterError("lookahead k must be even and >= 0");
    if (branching < 2 || branching > 64) throw ParameterError("B must lie in [2, 64]");
    const PropagationTree tree{branching, trap_p, lookahead};
    const Tally t = run_chunks(trials, seed, [&](SplitMix64& rng, Tally& tally) {
        ++tally.support;
        if (tree.errs(rng, 0)) ++tally.hits;
    });
    return to_estimate(t, trials);
}

}  // namespace boardsplit::analysis
