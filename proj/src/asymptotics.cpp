#include "detnet/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "detnet/errors.hpp"
#include "detnet/gauss.hpp"
#include "detnet/objectives.hpp"

namespace detnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kProbClamp = 1e-12;  // keeps f_kl arguments strictly inside (0,1)

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

// Law of node k's parent pattern under each hypothesis, by enumeration over
// all decision vectors.
std::vector<std::array<double, 2>> pattern_law(const Dag& d, const WgnModel& m,
                                               const ThresholdRuleSet& rules, int k) {
    const RegionProbs rp = region_probs(d, m, rules);
    const int n = d.n();
    std::vector<std::array<double, 2>> law(std::size_t{1} << d.in_degree(k), {0.0, 0.0});
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const std::uint32_t b = parent_context(d, k, mask);
        for (int h = 0; h < 2; ++h) {
            double prod = 1.0;
            for (int i = 1; i <= n && prod != 0.0; ++i) {
                const double p1 = rp.up1(h, i, parent_context(d, i, mask));
                prod *= (mask >> (i - 1) & 1u) ? p1 : 1.0 - p1;
            }
            law[b][h] += prod;
        }
    }
    return law;
}

double yx_cut_objective(const WgnModel& m, double base, double cut) {
    const Gaussian1D y0 = m.h0(2), y1 = m.h1(2);
    const double alpha = clamp_prob(q_function((cut - y0.mean) / y0.sd()));
    const double beta = clamp_prob(q_function((cut - y1.mean) / y1.sd()));
    return kl_yx(base, alpha, beta);
}

}  // namespace

KlAtNode kl_at_node(const Dag& d, const WgnModel& m, const ThresholdRuleSet& rules, int k) {
    if (k < 1 || k > d.n()) throw ValidationError("node index out of range");
    KlAtNode out;
    out.continuous_term = kl_divergence_gauss(m.h0(k), m.h1(k));
    for (const auto& [p0, p1] : pattern_law(d, m, rules, k)) {
        if (p0 == 0.0) continue;
        if (p1 == 0.0) {
            out.infinite = true;
            out.discrete_term = kInf;
            break;
        }
        out.discrete_term += p0 * std::log(p0 / p1);
    }
    out.discrete_term = std::max(out.discrete_term, 0.0);  // guard -0 rounding
    out.value = out.continuous_term + out.discrete_term;
    return out;
}

double chernoff_at_node(const Dag& d, const WgnModel& m, const ThresholdRuleSet& rules, int k) {
    if (k < 1 || k > d.n()) throw ValidationError("node index out of range");
    const auto law = pattern_law(d, m, rules, k);
    const Gaussian1D g0 = m.h0(k), g1 = m.h1(k);
    const auto exponent = [&](double s) {
        double discrete = 0.0;
        for (const auto& [p0, p1] : law)
            discrete += std::pow(p0, 1.0 - s) * std::pow(p1, s);
        return std::log(discrete) + log_tilted_integral(g0, g1, s);
    };
    const double gr = 0.6180339887498948482;
    double lo = 0.0, hi = 1.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = exponent(x1), f2 = exponent(x2);
    while (hi - lo > 1e-10) {
        if (f1 > f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = exponent(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = exponent(x1);
        }
    }
    const double c = -exponent(0.5 * (lo + hi));
    return c > 0.0 ? c : 0.0;
}

KlYxResult maximize_kl_yx(const WgnModel& two_sensor, const OptConfig& cfg) {
    if (two_sensor.sigma.size() != 2)
        throw ValidationError("one-way exponent needs exactly two sensors");
    const double base = kl_divergence_gauss(two_sensor.h0(1), two_sensor.h1(1));
    const Gaussian1D y0 = two_sensor.h0(2), y1 = two_sensor.h1(2);
    SearchBox box;
    box.lo = {y0.mean - 8.0 * y0.sd()};
    box.hi = {y1.mean + 8.0 * y1.sd()};
    box.init = {0.5 * (y0.mean + y1.mean)};
    const SearchResult sr = coordinate_search(
        [&](const std::vector<double>& z) { return yx_cut_objective(two_sensor, base, z[0]); },
        box, SearchDirection::maximize, cfg);
    KlYxResult res;
    res.k_max = sr.value;
    const double cut = sr.x[0];
    res.alpha = q_function((cut - y0.mean) / y0.sd());
    res.beta = q_function((cut - y1.mean) / y1.sd());
    res.thr = std::exp((cut - 0.5 * (y0.mean + y1.mean)) * (y1.mean - y0.mean) / y0.variance);
    res.converged = sr.converged;
    return res;
}

KlXyxResult maximize_kl_xyx(const WgnModel& two_sensor, const OptConfig& cfg) {
    if (two_sensor.sigma.size() != 2)
        throw ValidationError("interactive exponent needs exactly two sensors");
    const Gaussian1D x0 = two_sensor.h0(1), x1 = two_sensor.h1(1);
    const Gaussian1D y0 = two_sensor.h0(2), y1 = two_sensor.h1(2);
    const double base = kl_divergence_gauss(x0, x1);
    // First-stage rule held fixed: the unit-threshold likelihood test on x.
    const double first_cut = lrt_cut_point(1.0, x0, x1);
    const double a1 = q_function((first_cut - x0.mean) / x0.sd());

    SearchBox box;
    for (int u = 0; u < 2; ++u) {
        box.lo.push_back(y0.mean - 8.0 * y0.sd());
        box.hi.push_back(y1.mean + 8.0 * y1.sd());
        box.init.push_back(0.5 * (y0.mean + y1.mean));
    }
    const auto pair_at = [&](double cut) {
        return std::pair{clamp_prob(q_function((cut - y0.mean) / y0.sd())),
                         clamp_prob(q_function((cut - y1.mean) / y1.sd()))};
    };
    const SearchResult sr = coordinate_search(
        [&](const std::vector<double>& z) {
            const auto [al0, be0] = pair_at(z[0]);
            const auto [al1, be1] = pair_at(z[1]);
            return kl_xyx(base, a1, al0, be0, al1, be1);
        },
        box, SearchDirection::maximize, cfg);
    KlXyxResult res;
    res.k_max = sr.value;
    res.a1 = a1;
    for (int u = 0; u < 2; ++u) {
        const double cut = sr.x[u];
        res.alpha[u] = q_function((cut - y0.mean) / y0.sd());
        res.beta[u] = q_function((cut - y1.mean) / y1.sd());
        res.thr[u] =
            std::exp((cut - 0.5 * (y0.mean + y1.mean)) * (y1.mean - y0.mean) / y0.variance);
    }
    res.converged = sr.converged;
    return res;
}

int global_fusion_center(const Dag& d, const WgnModel& m, const ThresholdRuleSet& rules) {
    int best = 1;
    double best_value = -kInf;
    for (int k = 1; k <= d.n(); ++k) {
        const double v = chernoff_at_node(d, m, rules, k);
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    return best;
}

PatternFamily enumerate_patterns(int n, int max_edges) {
    if (n < 1 || n > 4) throw ValidationError("pattern enumeration supports 1..4 nodes");
    if (max_edges < 0) throw ValidationError("max_edges must be >= 0");
    std::vector<std::pair<int, int>> candidates;  // node 1 is a sink: no arrows out of it
    for (int from = 2; from <= n; ++from)
        for (int to = 1; to <= n; ++to)
            if (to != from) candidates.emplace_back(from, to);
    PatternFamily family;
    family.n = n;
    family.max_edges = max_edges;
    const std::size_t subsets = std::size_t{1} << candidates.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<std::pair<int, int>> edges;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (mask >> i & 1u) edges.push_back(candidates[i]);
        if (static_cast<int>(edges.size()) > max_edges) continue;
        try {
            family.members.push_back(dag_from_edges(n, edges));
        } catch (const ValidationError&) {
            continue;  // cyclic, disconnected, or otherwise inadmissible
        }
        if (family.members.size() > 10000)
            throw BudgetError("pattern family exceeds 10000 members");
    }
    return family;
}

PatternChoice optimal_pattern(const PatternFamily& family, const WgnModel& m,
                              const OptConfig& cfg) {
    if (family.members.empty()) throw ValidationError("pattern family is empty");
    if (static_cast<int>(m.sigma.size()) != family.n)
        throw ValidationError("model size must match the family's node count");
    const CostMatrix cost = CostMatrix::zero_one();
    std::optional<PatternChoice> best;
    for (const Dag& d : family.members) {
        const OptResult opt = pbpo_bayes(d, m, cost, 0.5, cfg);
        const int gfc = global_fusion_center(d, m, opt.rules);
        const double value = chernoff_at_node(d, m, opt.rules, gfc);
        if (!best || value > best->value) best = PatternChoice{d, gfc, value};
    }
    return *best;
}

}  // namespace detnet
