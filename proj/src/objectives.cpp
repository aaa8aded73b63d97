#include "detnet/objectives.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "detnet/errors.hpp"
#include "detnet/gauss.hpp"

namespace detnet {

RegionProbs region_probs(const Dag& d, const WgnModel& m, const ThresholdRuleSet& rules) {
    if (static_cast<int>(m.sigma.size()) != d.n())
        throw ValidationError("model has " + std::to_string(m.sigma.size()) +
                              " sensors, network has " + std::to_string(d.n()));
    validate(d, rules);
    RegionProbs rp;
    for (int h = 0; h < 2; ++h) rp.p[h].resize(d.n());
    for (int k = 1; k <= d.n(); ++k) {
        const auto& thr = rules.thr[k - 1];
        const Gaussian1D g0 = m.h0(k), g1 = m.h1(k);
        rp.p[0][k - 1].resize(thr.size());
        rp.p[1][k - 1].resize(thr.size());
        for (std::size_t c = 0; c < thr.size(); ++c) {
            const double cut = lrt_cut_point(thr[c], g0, g1);
            rp.p[0][k - 1][c] = q_function((cut - g0.mean) / g0.sd());
            rp.p[1][k - 1][c] = q_function((cut - g1.mean) / g1.sd());
        }
    }
    return rp;
}

namespace {

void check_prior(double prior1) {
    if (!(prior1 > 0.0) || !(prior1 < 1.0))
        throw ValidationError("prior must lie strictly in (0,1)");
}

// P_h(final decision = 1) by enumeration over all decision vectors.
double final_decision_prob(const Dag& d, const RegionProbs& rp, int h) {
    const int n = d.n();
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        if (!(mask & 1u)) continue;  // only u_1 = 1 contributes
        double prod = 1.0;
        for (int k = 1; k <= n && prod != 0.0; ++k) {
            const double p1 = rp.up1(h, k, parent_context(d, k, mask));
            prod *= (mask >> (k - 1) & 1u) ? p1 : 1.0 - p1;
        }
        total += prod;
    }
    return total;
}

}  // namespace

double bayes_risk(const Dag& d, const CostMatrix& cost, double prior1, const RegionProbs& rp) {
    check_prior(prior1);
    const int n = d.n();
    if (n > 20) throw ValidationError("decision-vector enumeration limited to 20 nodes");
    const double pi[2] = {1.0 - prior1, prior1};
    // C[u1][h]
    const double C[2][2] = {{cost.c00, cost.c01}, {cost.c10, cost.c11}};
    double risk = 0.0;
    for (int h = 0; h < 2; ++h) {
        double acc = 0.0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            double prod = 1.0;
            for (int k = 1; k <= n && prod != 0.0; ++k) {
                const double p1 = rp.up1(h, k, parent_context(d, k, mask));
                prod *= (mask >> (k - 1) & 1u) ? p1 : 1.0 - p1;
            }
            acc += C[mask & 1u][h] * prod;
        }
        risk += pi[h] * acc;
    }
    return risk;
}

double bayes_risk_with_channels(const Dag& d, const CostMatrix& cost, double prior1,
                                const RegionProbs& rp, const ChannelSet& channels) {
    if (static_cast<int>(channels.size()) != d.n())
        throw ValidationError("need one channel per node");
    // Channels act per node on the transmitted pattern; since corruption is
    // independent across nodes the risk equals bayes_risk on mixed region
    // probabilities p~_h(u=1 | sent) = sum_recv chan[sent][recv] p_h(u=1 | recv).
    RegionProbs mixed = rp;
    for (int k = 1; k <= d.n(); ++k) {
        const std::size_t size = std::size_t{1} << d.in_degree(k);
        const ChannelMatrix& ch = channels[k - 1];
        validate(ch);
        if (ch.m.size() != size)
            throw ValidationError("channel for node " + std::to_string(k) + " has size " +
                                  std::to_string(ch.m.size()) + ", expected " +
                                  std::to_string(size));
        for (int h = 0; h < 2; ++h) {
            for (std::size_t sent = 0; sent < size; ++sent) {
                double acc = 0.0;
                for (std::size_t recv = 0; recv < size; ++recv)
                    acc += ch.m[sent][recv] * rp.p[h][k - 1][recv];
                mixed.p[h][k - 1][sent] = acc;
            }
        }
    }
    return bayes_risk(d, cost, prior1, mixed);
}

NpMetrics np_metrics(const Dag& d, const RegionProbs& rp) {
    return {final_decision_prob(d, rp, 0), final_decision_prob(d, rp, 1)};
}

double np_lagrangian(double pd, double pf, double mult, double alpha) {
    if (!(mult >= 0.0)) throw ValidationError("multiplier must be >= 0");
    return pd + mult * (alpha - pf);
}

double f_kl(double alpha, double beta) {
    if (!(alpha > 0.0) || !(alpha < 1.0) || !(beta > 0.0) || !(beta < 1.0))
        throw std::domain_error("f_kl: arguments must lie strictly in (0,1)");
    return alpha * std::log(alpha / beta) +
           (1.0 - alpha) * std::log((1.0 - alpha) / (1.0 - beta));
}

double kl_yx(double base, double alpha, double beta) {
    if (!(base >= 0.0)) throw ValidationError("kl_yx: base divergence must be >= 0");
    return base + f_kl(alpha, beta);
}

double kl_xyx(double base, double a1, double alpha0, double beta0, double alpha1, double beta1) {
    if (!(base >= 0.0)) throw ValidationError("kl_xyx: base divergence must be >= 0");
    if (!(a1 >= 0.0) || !(a1 <= 1.0)) throw ValidationError("kl_xyx: a1 must lie in [0,1]");
    return base + a1 * f_kl(alpha1, beta1) + (1.0 - a1) * f_kl(alpha0, beta0);
}

}  // namespace detnet
