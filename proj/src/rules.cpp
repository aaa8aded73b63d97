#include "detnet/rules.hpp"

#include <cmath>
#include <string>

#include "detnet/errors.hpp"

namespace detnet {

CostMatrix::CostMatrix(double c00_, double c01_, double c10_, double c11_)
    : c00(c00_), c01(c01_), c10(c10_), c11(c11_) {
    if (!std::isfinite(c00) || !std::isfinite(c01) || !std::isfinite(c10) || !std::isfinite(c11))
        throw ValidationError("CostMatrix: entries must be finite");
    if (!(c10 > c00))
        throw ValidationError("CostMatrix: false alarm must cost more than a correct "
                              "rejection (C10 > C00)");
    if (!(c01 > c11))
        throw ValidationError("CostMatrix: a miss must cost more than a correct "
                              "detection (C01 > C11)");
}

double bayes_lrt_threshold(const CostMatrix& cost, double prior1) {
    if (!(prior1 > 0.0) || !(prior1 < 1.0))
        throw ValidationError("prior must lie strictly in (0,1)");
    return (cost.c10 - cost.c00) * (1.0 - prior1) / ((cost.c01 - cost.c11) * prior1);
}

ThresholdRuleSet ThresholdRuleSet::uniform(const Dag& d, double threshold) {
    ThresholdRuleSet r;
    r.thr.resize(d.n());
    for (int k = 1; k <= d.n(); ++k)
        r.thr[k - 1].assign(std::size_t{1} << d.in_degree(k), threshold);
    return r;
}

void validate(const Dag& d, const ThresholdRuleSet& rules) {
    if (static_cast<int>(rules.thr.size()) != d.n())
        throw ValidationError("rule set covers " + std::to_string(rules.thr.size()) +
                              " nodes, network has " + std::to_string(d.n()));
    for (int k = 1; k <= d.n(); ++k) {
        const auto expect = std::size_t{1} << d.in_degree(k);
        if (rules.thr[k - 1].size() != expect)
            throw ValidationError("node " + std::to_string(k) + " needs " +
                                  std::to_string(expect) + " thresholds, got " +
                                  std::to_string(rules.thr[k - 1].size()));
        for (double t : rules.thr[k - 1])
            if (std::isnan(t) || t < 0.0)
                throw ValidationError("node " + std::to_string(k) +
                                      ": thresholds must lie in [0, +inf]");
    }
}

ChannelMatrix ChannelMatrix::identity(std::size_t size) {
    ChannelMatrix c;
    c.m.assign(size, std::vector<double>(size, 0.0));
    for (std::size_t i = 0; i < size; ++i) c.m[i][i] = 1.0;
    return c;
}

ChannelMatrix ChannelMatrix::symmetric_flip(std::size_t bits, double eps) {
    if (eps < 0.0 || eps > 1.0) throw ValidationError("flip probability must be in [0,1]");
    const std::size_t size = std::size_t{1} << bits;
    ChannelMatrix c;
    c.m.assign(size, std::vector<double>(size, 0.0));
    for (std::size_t sent = 0; sent < size; ++sent) {
        for (std::size_t recv = 0; recv < size; ++recv) {
            const auto flips = static_cast<std::size_t>(__builtin_popcountll(sent ^ recv));
            c.m[sent][recv] =
                std::pow(eps, static_cast<double>(flips)) *
                std::pow(1.0 - eps, static_cast<double>(bits - flips));
        }
    }
    return c;
}

void validate(const ChannelMatrix& c) {
    const std::size_t n = c.m.size();
    if (n == 0) throw ValidationError("channel matrix is empty");
    for (std::size_t i = 0; i < n; ++i) {
        if (c.m[i].size() != n) throw ValidationError("channel matrix is not square");
        double row = 0.0;
        for (double v : c.m[i]) {
            if (!(v >= 0.0)) throw ValidationError("channel entries must be >= 0");
            row += v;
        }
        if (std::fabs(row - 1.0) > 1e-12)
            throw ValidationError("channel row " + std::to_string(i) +
                                  " sums to " + std::to_string(row) + ", expected 1");
    }
}

ChannelSet identity_channels(const Dag& d) {
    ChannelSet set;
    set.reserve(d.n());
    for (int k = 1; k <= d.n(); ++k)
        set.push_back(ChannelMatrix::identity(std::size_t{1} << d.in_degree(k)));
    return set;
}

}  // namespace detnet
