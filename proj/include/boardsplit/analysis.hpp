#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace boardsplit::analysis {

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Root of (1 - x)^B = x on (0, 1), by bisection.
double fair_p(int branching);

struct AnalysisParams {
    int branching;
    int depth;
    double p;
    int lookahead;  // even
};

/// Side used by the trap model: B^{D - k/2 - 1}.
int model_side(const AnalysisParams& params);
/// Side of an actual board at even level k: B^{D - k/2}.
int geometric_side(const AnalysisParams& params);

/// Probability that an S x S Bernoulli(p) board has a row of 1's: 1 - (1 - p^S)^S.
double trap_prob(int side, double p);

/// Binomial mass C(B, i) P^i (1 - P)^{B - i}.
double pr_i_traps(int branching, double trap_p, int i);

/// The printed "max child is not a trap" formula, evaluated verbatim with
/// log-space binomials. The result is not clamped; for p > 1/2 it can leave [0, 1].
double pr_ntn(int side, double p, int branching);

/// pr_ntn(S, p, B) * sum_{i=1}^{B-1} pr_i_traps(B, trap_prob(S, p), i).
double pr_n_errs(int side, double p, int branching);

/// Error probability of an arbitrary chooser over B children: (1 - P) - (1 - P)^B.
double pr_r_errs(int branching, double trap_p);

struct TraceLevel {
    int level;
    double error;
};

struct PropagationTrace {
    std::vector<TraceLevel> levels;  // from level k down to level 0
    double root() const { return levels.back().error; }
};

/// Alternates x -> x^B (min levels) and x -> (1 - x) - (1 - x)^B (max levels)
/// from level k up to level 0.
PropagationTrace propagate_to_root(double tip_error, int branching, int lookahead);

struct CurvePoint {
    int lookahead;
    int side;
    double trap_p;
    double tip_error;
    double p0;
};

std::vector<CurvePoint> p0_curve(int branching, int depth, double p, std::span<const int> lookaheads);

struct GrowthCheck {
    bool nondecreasing;
    bool strictly_increasing;
    /// Consecutive (k_i, k_{i+1}) pairs where P_0 decreased.
    std::vector<std::pair<int, int>> decreases;
};

GrowthCheck check_growth(std::span<const CurvePoint> curve);

struct McEstimate {
    std::optional<double> estimate;  // empty when no trial met the condition
    double std_error = 0.0;
    std::int64_t support = 0;        // trials counted in the estimate
    std::int64_t trials = 0;
    double tie_rate = 0.0;           // fraction of supported trials with a tied maximum
};

/// Monte Carlo trap probability over `trials` S x S boards.
McEstimate mc_trap_prob(int side, double p, std::int64_t trials, std::uint64_t seed);

/// Among trials where at least one of B boards has a row of 1's: the fraction in
/// which a unique maximum ones-count belongs to a non-trap board. Ties of the
/// maximum count as "not a non-trap maximum" and are reported in tie_rate.
McEstimate mc_ntn(int side, double p, int branching, std::int64_t trials, std::uint64_t seed);

/// Synthetic uniform trees of depth k+1 with i.i.d. trap tips. A max node with
/// i "good" children (trap tips, or non-erring subtrees) errs when 1 <= i < B
/// and a uniformly chosen child is not good; a min node errs iff all children err.
McEstimate mc_propagation(int branching, double trap_p, int lookahead, std::int64_t trials, std::uint64_t seed);

}  // namespace boardsplit::analysis
