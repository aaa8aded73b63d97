#pragma once

#include <array>
#include <vector>

#include "detnet/dag.hpp"
#include "detnet/models.hpp"
#include "detnet/optimizer.hpp"
#include "detnet/rules.hpp"

namespace detnet {

// KL divergence of node k's decision-augmented observation (x_k, u-pattern):
// continuous Gaussian term plus the discrete divergence of the parent-pattern
// law.  A pattern with P1 = 0 < P0 makes the divergence infinite; that is
// reported through the flag, never an exception.
struct KlAtNode {
    double value = 0.0;
    bool infinite = false;
    double continuous_term = 0.0;
    double discrete_term = 0.0;
};
KlAtNode kl_at_node(const Dag& d, const WgnModel& m, const ThresholdRuleSet& rules, int k);

// Chernoff information of the same augmented observation:
// -min_{s in [0,1]} log sum_pattern P0^| {1-s} P1^s * (Gaussian mixture
// integral), the discrete and continuous factors separating under conditional
// independence.
double chernoff_at_node(const Dag& d, const WgnModel& m, const ThresholdRuleSet& rules, int k);

// Error exponent of the one-way tandem process, maximized over the
// peripheral sensor's single threshold.  Sensor 1 = X (fusion), sensor 2 = Y.
struct KlYxResult {
    double k_max = 0.0;
    double alpha = 0.0, beta = 0.0;  // P0 / P1 of the peripheral decision
    double thr = 0.0;                // peripheral LRT threshold at the optimum
    bool converged = false;
};
KlYxResult maximize_kl_yx(const WgnModel& two_sensor, const OptConfig& cfg = {});

// Error exponent of the interactive process, maximized over the per-u
// peripheral thresholds; the first-stage rule fixes a1 = P0(u = 1).
struct KlXyxResult {
    double k_max = 0.0;
    double a1 = 0.0;
    std::array<double, 2> alpha{}, beta{}, thr{};  // per received u
    bool converged = false;
};
KlXyxResult maximize_kl_xyx(const WgnModel& two_sensor, const OptConfig& cfg = {});

// Node with maximal Chernoff information over (x_k, pattern_k); ties to the
// lowest index.
int global_fusion_center(const Dag& d, const WgnModel& m, const ThresholdRuleSet& rules);

// All weakly connected acyclic patterns on n nodes with at most max_edges
// arrows and node 1 a sink.
struct PatternFamily {
    int n = 0;
    int max_edges = 0;
    std::vector<Dag> members;
};
PatternFamily enumerate_patterns(int n, int max_edges);  // guarded: n <= 4, family <= 1e4

struct PatternChoice {
    Dag dag;
    int gfc = 1;
    double value = 0.0;  // Chernoff information at the GFC
};

// Search the family for the pattern whose best node carries the most Chernoff
// information; rules per pattern optimize 0-1 Bayes risk at prior 1/2.
PatternChoice optimal_pattern(const PatternFamily& family, const WgnModel& m,
                              const OptConfig& cfg = {});

}  // namespace detnet
