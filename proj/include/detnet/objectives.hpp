#pragma once

#include "detnet/dag.hpp"
#include "detnet/models.hpp"
#include "detnet/rules.hpp"

namespace detnet {

// Map a threshold rule set to per-(node, pattern) region probabilities under
// the conditionally independent Gaussian model.
RegionProbs region_probs(const Dag& d, const WgnModel& m, const ThresholdRuleSet& rules);

// Expected cost  sum_{decisions, h} pi_h C_{u1 h} prod_k P_h(u_k | pattern_k)
// by explicit enumeration of all 2^n decision vectors.
double bayes_risk(const Dag& d, const CostMatrix& cost, double prior1, const RegionProbs& rp);

// Same objective with per-node message corruption: each node's region
// probability is first mixed across the patterns it may actually receive.
// Identity channels reproduce bayes_risk bit-for-bit.
double bayes_risk_with_channels(const Dag& d, const CostMatrix& cost, double prior1,
                                const RegionProbs& rp, const ChannelSet& channels);

struct NpMetrics {
    double pf;  // P_0(u_1 = 1)
    double pd;  // P_1(u_1 = 1)
};
NpMetrics np_metrics(const Dag& d, const RegionProbs& rp);

// Lagrangian of the false-alarm-constrained detection problem.
double np_lagrangian(double pd, double pf, double mult, double alpha);

// Binary KL divergence f(alpha, beta) = alpha ln(alpha/beta)
// + (1-alpha) ln((1-alpha)/(1-beta)), natural logs.  Boundary inputs are a
// domain error (no clamping).
double f_kl(double alpha, double beta);

// Error exponents of the tandem and interactive fusion processes:
// base KL of the fusion sensor's own observation plus the quantization terms.
double kl_yx(double base, double alpha, double beta);
double kl_xyx(double base, double a1, double alpha0, double beta0, double alpha1,
              double beta1);

}  // namespace detnet
