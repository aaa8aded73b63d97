#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "detnet/dag.hpp"
#include "detnet/intervals.hpp"
#include "detnet/models.hpp"
#include "detnet/objectives.hpp"
#include "detnet/rules.hpp"

namespace detnet {

struct OptConfig {
    double tol = 1e-8;       // fixed-point residual / objective-change tolerance
    int max_iter = 500;      // sweeps (PBPO) or coordinate cycles (search)
    int restarts = 8;        // multi-start count (>= 1; first start unperturbed)
    int grid_points = 33;    // bracketing grid per coordinate line search
    std::uint64_t rng_seed = 0;
    double np_pf_tol = 1e-4;  // |P_f - alpha| stopping tolerance of np_solve
};

void validate(const OptConfig& cfg);

struct OptResult {
    ThresholdRuleSet rules;
    double objective_value = 0.0;
    RegionProbs region_probs;
    bool converged = false;
    int iterations = 0;
    double fixed_point_residual = 0.0;
    int degenerate_ratio_count = 0;  // near-zero denominators hit during updates
};

// Person-by-person Bayes optimization on a general acyclic network: sweeps
// the per-(node, pattern) optimal-threshold ratio formulas to a fixed point;
// best of `restarts` runs from perturbed initializations.
OptResult pbpo_bayes(const Dag& d, const WgnModel& m, const CostMatrix& cost, double prior1,
                     const OptConfig& cfg = {});

// Re-evaluate every optimal-threshold formula at the rule set's region
// probabilities and report the largest relative change (floor 1 on the
// denominator).  This is the necessary-condition residual reported in
// OptResult::fixed_point_residual.
double bayes_fixed_point_residual(const Dag& d, const WgnModel& m, const CostMatrix& cost,
                                  double prior1, const ThresholdRuleSet& rules);

// Two-sensor Neyman-Pearson configurations.  Sensor 1 is X (makes the final
// decision w), sensor 2 is Y.  tandem_yx: Y sends one bit to X.
// interactive_xyx: X sends a first bit to Y, Y replies, X decides.
enum class FusionScheme { single, tandem_yx, interactive_xyx };

// Interactive-scheme rule set.  The first-stage region r_u1 is a union of
// intervals determined by the sign pattern of
// Q(x) = I_{w=1|v=1}(x) - I_{w=1|v=0}(x) against the first-stage threshold.
struct InteractiveRules {
    IntervalSet r_u1;
    double first_stage_thr = 1.0;                          // threshold multiplying Q-sign
    std::array<double, 2> y_thr{1.0, 1.0};                 // per received u
    std::array<std::array<double, 2>, 2> x_thr{{{1.0, 1.0}, {1.0, 1.0}}};  // [v][u]
};

struct NpFixedResult {
    double mult = 0.0;
    double pf = 0.0, pd = 0.0;
    double lagrangian = 0.0;  // pd - mult*pf (the ceiling term mult*alpha is constant here)
    bool converged = false;
    int iterations = 0;
    double fixed_point_residual = 0.0;
    ThresholdRuleSet rules;                     // single: 1 entry; tandem: per-v table
    std::optional<InteractiveRules> interactive;
};

// Maximize pd + mult*(alpha - pf) at fixed multiplier by iterating the
// optimal-threshold formulas of the chosen scheme.
NpFixedResult pbpo_np_fixed_multiplier(const WgnModel& m, FusionScheme scheme, double mult,
                                       const OptConfig& cfg = {});

struct NpSolveResult {
    NpFixedResult best;
    double alpha = 0.0;
    int outer_iterations = 0;
    bool used_grid_fallback = false;
};

// Outer bisection on the multiplier over [0, 1e6] until |P_f - alpha| <=
// cfg.np_pf_tol or the bracket is below 1e-10; non-monotone P_f triggers a
// 64-point grid re-bracketing.  Throws InfeasibleConstraintError when alpha
// is unreachable.
NpSolveResult np_solve(const WgnModel& m, FusionScheme scheme, double alpha,
                       const OptConfig& cfg = {});

// ---------------------------------------------------------------------------
// Derivative-free search.

struct SearchBox {
    std::vector<double> lo, hi;  // per coordinate
    std::vector<double> init;    // inside the box
};

enum class SearchDirection { minimize, maximize };

struct SearchResult {
    std::vector<double> x;
    double value = 0.0;  // objective at x
    bool converged = false;
    int iterations = 0;
    double last_improvement = 0.0;  // objective gain of the final cycle
};

// Multi-start cyclic coordinate descent; per coordinate a bracketing grid of
// cfg.grid_points followed by golden-section refinement.  Never returns a
// point worse than the supplied initialization.
SearchResult coordinate_search(const std::function<double(const std::vector<double>&)>& objective,
                               const SearchBox& box, SearchDirection dir, const OptConfig& cfg = {});

// Coordinate-search over a full threshold table (cut-point coordinates) for
// the Bayes objective; global cross-check of pbpo_bayes, and the optimizer
// used with message channels, where the fixed-point formulas do not apply.
OptResult optimize_bayes_search(const Dag& d, const WgnModel& m, const CostMatrix& cost,
                                double prior1, const OptConfig& cfg = {});
OptResult optimize_bayes_channels_search(const Dag& d, const WgnModel& m, const CostMatrix& cost,
                                         double prior1, const ChannelSet& channels,
                                         const OptConfig& cfg = {});

// Error-probability minimization for the correlated two-sensor model over the
// six interval endpoints, in (midpoint, log-width) coordinates.
struct CorrelatedOptResult {
    CorrelatedThresholds th{};
    double pe = 0.0;
    bool converged = false;
    int iterations = 0;
};
CorrelatedOptResult optimize_correlated(const CorrelatedModel& m, double prior1,
                                        const OptConfig& cfg = {},
                                        const QuadratureSpec& quad = {});

// ---------------------------------------------------------------------------
// Exhaustive quantized oracle.

// Observation space of each sensor quantized to m cells (boundaries equally
// spaced over [mu0 - 4 sigma_k, mu1 + 4 sigma_k]); enumerate every
// deterministic labeling of (cell, parent pattern) -> decision.  Only
// one- and two-node networks with m <= 12 are in budget.
struct QuantizedBrute {
    double best_value = 0.0;
    // labels[k-1][context * m + cell] for the best labeling found
    std::vector<std::vector<std::uint8_t>> labels;
    bool best_is_monotone = false;   // monotone in cell likelihood ratio per context
    double threshold_rule_value = 0.0;  // optimum over threshold labelings only
};
QuantizedBrute brute_force_oracle(const Dag& d, const WgnModel& m, const CostMatrix& cost,
                                  double prior1, int cells);

}  // namespace detnet
