#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "detnet/dag.hpp"

namespace detnet {

// Decision costs C_{decision,hypothesis}; wrong decisions must cost strictly
// more than right ones (c10 > c00, c01 > c11).
struct CostMatrix {
    double c00, c01, c10, c11;

    CostMatrix(double c00_, double c01_, double c10_, double c11_);
    static CostMatrix zero_one() { return {0.0, 1.0, 1.0, 0.0}; }
};

// LRT threshold lambda0 of the decoupled (single-sensor) Bayes rule.
double bayes_lrt_threshold(const CostMatrix& cost, double prior1);

// One LRT threshold per (node, parent-message pattern).  thr[k-1] has
// 2^{in_degree(k)} entries ordered by parent_context.  Thresholds live in
// [0, +inf]; 0 and +inf are first-class (always-1 / always-0 rules).
struct ThresholdRuleSet {
    std::vector<std::vector<double>> thr;

    static ThresholdRuleSet uniform(const Dag& d, double threshold);
};

void validate(const Dag& d, const ThresholdRuleSet& rules);

// P_h(u_k = 1 | parent pattern) for h in {0,1}: p[h][k-1][context].
// The complementary u_k = 0 probability is 1 - entry by construction.
struct RegionProbs {
    std::array<std::vector<std::vector<double>>, 2> p;

    double up1(int h, int k, std::uint32_t context) const { return p[h][k - 1][context]; }
};

// Row-stochastic confusion matrix over a node's incoming message patterns:
// m[received][sent]... rows indexed by the sent pattern, columns by the
// received pattern; row sums must be 1 within 1e-12, entries >= 0.
struct ChannelMatrix {
    std::vector<std::vector<double>> m;  // m[sent][received]

    static ChannelMatrix identity(std::size_t size);
    static ChannelMatrix symmetric_flip(std::size_t bits, double eps);  // iid per-bit flip
};

void validate(const ChannelMatrix& c);

// One channel per node, sized 2^{in_degree}.
using ChannelSet = std::vector<ChannelMatrix>;

ChannelSet identity_channels(const Dag& d);

}  // namespace detnet
