#include "detnet/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "detnet/errors.hpp"
#include "detnet/gauss.hpp"

namespace detnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDenomEps = 1e-14;

// Implementation-independent uniforms so results are reproducible bit for bit.
double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
double uniform_pm1(std::mt19937_64& gen) { return 2.0 * uniform01(gen) - 1.0; }

std::mt19937_64 restart_rng(const OptConfig& cfg, int restart) {
    return std::mt19937_64(cfg.rng_seed +
                           0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(restart));
}

double rel_change(double oldv, double newv) {
    if (oldv == newv) return 0.0;  // also covers matching infinities
    if (!std::isfinite(oldv) || !std::isfinite(newv)) return kInf;
    return std::abs(newv - oldv) / std::max(1.0, std::abs(oldv));
}

// Optimal threshold of the rule "decide 1 iff b*p1(x) > a*p0(x)".  When the
// denominator is too small (or negative) no nonnegative LRT threshold
// represents the comparison; fall back to the better of the two constant
// rules, whose objective gap is exactly a - b.
double ratio_threshold(double a, double b, int& degenerate_count) {
    if (b > kDenomEps) return a <= 0.0 ? 0.0 : a / b;
    ++degenerate_count;
    return a - b < 0.0 ? 0.0 : kInf;
}

double upper_tail(const Gaussian1D& g, double cut) {
    return q_function((cut - g.mean) / g.sd());
}

// ---------------------------------------------------------------------------
// Bayes person-by-person updates.

// New thresholds for every parent context of node k, holding all other rules
// fixed at the given region probabilities.  The risk is affine in node k's
// region; the slope under hypothesis h is accumulated by toggling u_k over
// every decision vector, with node k's own factor removed.
std::vector<double> node_formula_thresholds(const Dag& d, const CostMatrix& cost, double prior1,
                                            const RegionProbs& rp, int k,
                                            int& degenerate_count) {
    const int n = d.n();
    const std::size_t ctxs = std::size_t{1} << d.in_degree(k);
    std::vector<double> d0(ctxs, 0.0), d1(ctxs, 0.0);
    const double C[2][2] = {{cost.c00, cost.c01}, {cost.c10, cost.c11}};
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const std::uint32_t c = parent_context(d, k, mask);
        const double sign = (mask >> (k - 1) & 1u) ? 1.0 : -1.0;
        double p0 = 1.0, p1 = 1.0;
        for (int i = 1; i <= n; ++i) {
            if (i == k) continue;
            const std::uint32_t ci = parent_context(d, i, mask);
            const double q0 = rp.up1(0, i, ci), q1 = rp.up1(1, i, ci);
            if (mask >> (i - 1) & 1u) {
                p0 *= q0;
                p1 *= q1;
            } else {
                p0 *= 1.0 - q0;
                p1 *= 1.0 - q1;
            }
        }
        d0[c] += sign * C[mask & 1u][0] * p0;
        d1[c] += sign * C[mask & 1u][1] * p1;
    }
    std::vector<double> thr(ctxs);
    for (std::size_t c = 0; c < ctxs; ++c)
        thr[c] = ratio_threshold((1.0 - prior1) * d0[c], -prior1 * d1[c], degenerate_count);
    return thr;
}

void refresh_node_probs(const WgnModel& m, int k, const std::vector<double>& thr,
                        RegionProbs& rp) {
    const Gaussian1D g0 = m.h0(k), g1 = m.h1(k);
    for (std::size_t c = 0; c < thr.size(); ++c) {
        const double cut = lrt_cut_point(thr[c], g0, g1);
        rp.p[0][k - 1][c] = upper_tail(g0, cut);
        rp.p[1][k - 1][c] = upper_tail(g1, cut);
    }
}

double jacobi_residual(const Dag& d, const CostMatrix& cost, double prior1,
                       const RegionProbs& rp, const ThresholdRuleSet& rules) {
    double res = 0.0;
    int scratch = 0;
    for (int k = 1; k <= d.n(); ++k) {
        const auto thr = node_formula_thresholds(d, cost, prior1, rp, k, scratch);
        for (std::size_t c = 0; c < thr.size(); ++c)
            res = std::max(res, rel_change(rules.thr[k - 1][c], thr[c]));
    }
    return res;
}

}  // namespace

void validate(const OptConfig& cfg) {
    if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol))
        throw ValidationError("tolerance must be finite and > 0");
    if (cfg.max_iter < 1) throw ValidationError("max_iter must be >= 1");
    if (cfg.restarts < 1) throw ValidationError("restarts must be >= 1");
    if (cfg.grid_points < 3) throw ValidationError("grid_points must be >= 3");
    if (!(cfg.np_pf_tol > 0.0)) throw ValidationError("np_pf_tol must be > 0");
}

OptResult pbpo_bayes(const Dag& d, const WgnModel& m, const CostMatrix& cost, double prior1,
                     const OptConfig& cfg) {
    validate(cfg);
    const double lam0 = bayes_lrt_threshold(cost, prior1);
    const auto topo = topological_order(d);
    std::optional<OptResult> best;
    for (int r = 0; r < cfg.restarts; ++r) {
        ThresholdRuleSet rules = ThresholdRuleSet::uniform(d, lam0);
        if (r == 1) {
            // Deterministic symmetry breaker: the uniform start can sit on a
            // symmetric fixed point where per-context slopes cancel exactly.
            for (auto& row : rules.thr)
                for (std::size_t c = 0; c < row.size(); ++c)
                    row[c] = lam0 * std::exp(0.5 - (c + 0.5) / static_cast<double>(row.size()));
        } else if (r >= 2) {
            auto gen = restart_rng(cfg, r);
            for (auto& row : rules.thr)
                for (double& t : row) t = lam0 * std::exp(uniform_pm1(gen));
        }
        RegionProbs rp = region_probs(d, m, rules);
        int degenerate = 0;
        bool converged = false;
        int sweeps = 0;
        double residual = kInf;
        while (sweeps < cfg.max_iter) {
            ++sweeps;
            for (int k : topo) {
                rules.thr[k - 1] = node_formula_thresholds(d, cost, prior1, rp, k, degenerate);
                refresh_node_probs(m, k, rules.thr[k - 1], rp);
            }
            residual = jacobi_residual(d, cost, prior1, rp, rules);
            if (residual <= cfg.tol) {
                converged = true;
                break;
            }
        }
        OptResult res;
        res.rules = std::move(rules);
        res.objective_value = bayes_risk(d, cost, prior1, rp);
        res.region_probs = std::move(rp);
        res.converged = converged;
        res.iterations = sweeps;
        res.fixed_point_residual = residual;
        res.degenerate_ratio_count = degenerate;
        if (!best || res.objective_value < best->objective_value) best = std::move(res);
    }
    return *best;
}

double bayes_fixed_point_residual(const Dag& d, const WgnModel& m, const CostMatrix& cost,
                                  double prior1, const ThresholdRuleSet& rules) {
    const RegionProbs rp = region_probs(d, m, rules);
    return jacobi_residual(d, cost, prior1, rp, rules);
}

// ---------------------------------------------------------------------------
// Neyman-Pearson fixed-multiplier solvers.

namespace {

NpFixedResult solve_np_single(const WgnModel& m, double mult) {
    const Gaussian1D g0 = m.h0(1), g1 = m.h1(1);
    const double cut = lrt_cut_point(mult, g0, g1);
    NpFixedResult res;
    res.mult = mult;
    res.pf = upper_tail(g0, cut);
    res.pd = upper_tail(g1, cut);
    res.lagrangian = res.pd - mult * res.pf;
    res.converged = true;
    res.iterations = 1;
    res.fixed_point_residual = 0.0;
    res.rules.thr = {{mult}};
    return res;
}

struct TandemState {
    double l2 = 1.0;   // Y threshold
    double l30 = 1.0;  // X threshold given v = 0
    double l31 = 1.0;  // X threshold given v = 1
};

NpFixedResult solve_np_tandem(const WgnModel& m, double mult, const OptConfig& cfg) {
    const Gaussian1D x0 = m.h0(1), x1 = m.h1(1), y0 = m.h0(2), y1 = m.h1(2);
    const auto xtail = [&](int h, double thr) {
        const double cut = lrt_cut_point(thr, x0, x1);
        return upper_tail(h == 0 ? x0 : x1, cut);
    };
    const auto ytail = [&](int h, double thr) {
        const double cut = lrt_cut_point(thr, y0, y1);
        return upper_tail(h == 0 ? y0 : y1, cut);
    };
    // One person-by-person pass: Y's rule from the gap between X's two
    // conditional regions, then X's per-v rules from Y's region masses.
    const auto step = [&](const TandemState& s, int& deg) {
        TandemState t;
        const double a0 = xtail(0, s.l30), a1 = xtail(0, s.l31);
        const double b0 = xtail(1, s.l30), b1 = xtail(1, s.l31);
        t.l2 = ratio_threshold(mult * (a1 - a0), b1 - b0, deg);
        const double alpha = ytail(0, t.l2), beta = ytail(1, t.l2);
        t.l31 = ratio_threshold(mult * alpha, beta, deg);
        t.l30 = ratio_threshold(mult * (1.0 - alpha), 1.0 - beta, deg);
        return t;
    };
    // Pure re-evaluation at a state (no intermediate commits), for the
    // fixed-point residual.
    const auto formulas = [&](const TandemState& s) {
        TandemState t;
        int deg = 0;
        const double a0 = xtail(0, s.l30), a1 = xtail(0, s.l31);
        const double b0 = xtail(1, s.l30), b1 = xtail(1, s.l31);
        t.l2 = ratio_threshold(mult * (a1 - a0), b1 - b0, deg);
        const double alpha = ytail(0, s.l2), beta = ytail(1, s.l2);
        t.l31 = ratio_threshold(mult * alpha, beta, deg);
        t.l30 = ratio_threshold(mult * (1.0 - alpha), 1.0 - beta, deg);
        return t;
    };
    const auto state_residual = [](const TandemState& s, const TandemState& t) {
        return std::max({rel_change(s.l2, t.l2), rel_change(s.l30, t.l30),
                         rel_change(s.l31, t.l31)});
    };

    std::optional<NpFixedResult> best;
    for (int r = 0; r < cfg.restarts; ++r) {
        TandemState s{mult, mult, mult};
        if (r == 1) {
            s = {mult, mult * std::exp(0.5), mult * std::exp(-0.5)};
        } else if (r >= 2) {
            auto gen = restart_rng(cfg, r);
            s = {mult * std::exp(uniform_pm1(gen)), mult * std::exp(uniform_pm1(gen)),
                 mult * std::exp(uniform_pm1(gen))};
        }
        int degenerate = 0;
        bool converged = false;
        int it = 0;
        double residual = kInf;
        while (it < cfg.max_iter) {
            ++it;
            s = step(s, degenerate);
            residual = state_residual(s, formulas(s));
            if (residual <= cfg.tol) {
                converged = true;
                break;
            }
        }
        const double alpha = ytail(0, s.l2), beta = ytail(1, s.l2);
        const double a0 = xtail(0, s.l30), a1 = xtail(0, s.l31);
        const double b0 = xtail(1, s.l30), b1 = xtail(1, s.l31);
        NpFixedResult res;
        res.mult = mult;
        res.pf = alpha * a1 + (1.0 - alpha) * a0;
        res.pd = beta * b1 + (1.0 - beta) * b0;
        res.lagrangian = res.pd - mult * res.pf;
        res.converged = converged;
        res.iterations = it;
        res.fixed_point_residual = residual;
        res.rules.thr = {{s.l30, s.l31}, {s.l2}};
        if (!best || res.lagrangian > best->lagrangian) best = std::move(res);
    }
    return *best;
}

struct InteractiveState {
    IntervalSet ru1;
    double l1 = 1.0;
    std::array<double, 2> l2{1.0, 1.0};                          // per received u
    std::array<std::array<double, 2>, 2> l3{{{1.0, 1.0}, {1.0, 1.0}}};  // [v][u]
};

NpFixedResult solve_np_interactive(const WgnModel& m, double mult, const OptConfig& cfg) {
    const Gaussian1D x0 = m.h0(1), x1 = m.h1(1), y0 = m.h0(2), y1 = m.h1(2);
    const auto xcut = [&](double thr) { return lrt_cut_point(thr, x0, x1); };
    const auto ytail = [&](int h, double thr) {
        const double cut = lrt_cut_point(thr, y0, y1);
        return upper_tail(h == 0 ? y0 : y1, cut);
    };

    // Final-stage region for received v given the first-stage region: the
    // threshold is l3[v][1] inside R_{u=1} and l3[v][0] outside it.
    const auto final_region = [&](const InteractiveState& s, int v) {
        const IntervalSet inside = s.ru1.intersect(IntervalSet::above(xcut(s.l3[v][1])));
        const IntervalSet outside =
            s.ru1.complement().intersect(IntervalSet::above(xcut(s.l3[v][0])));
        return inside.unite(outside);
    };

    // One person-by-person sweep; commits stage by stage.
    const auto sweep = [&](InteractiveState s, int& deg) {
        const double alpha0 = ytail(0, s.l2[0]), alpha1 = ytail(0, s.l2[1]);
        const double beta0 = ytail(1, s.l2[0]), beta1 = ytail(1, s.l2[1]);
        for (int u = 0; u < 2; ++u) {
            const double au = u == 0 ? alpha0 : alpha1;
            const double bu = u == 0 ? beta0 : beta1;
            s.l3[1][u] = ratio_threshold(mult * au, bu, deg);
            s.l3[0][u] = ratio_threshold(mult * (1.0 - au), 1.0 - bu, deg);
        }
        s.l1 = ratio_threshold(mult * (alpha1 - alpha0), beta1 - beta0, deg);
        const IntervalSet rw1 = final_region(s, 1), rw0 = final_region(s, 0);
        const IntervalSet lr_above = IntervalSet::above(xcut(s.l1));
        s.ru1 = rw1.intersect(rw0.complement())
                    .intersect(lr_above)
                    .unite(rw0.intersect(rw1.complement()).intersect(lr_above.complement()));
        for (int u = 0; u < 2; ++u) {
            const IntervalSet ru = u == 1 ? s.ru1 : s.ru1.complement();
            const IntervalSet g1 = ru.intersect(IntervalSet::above(xcut(s.l3[1][u])));
            const IntervalSet g0 = ru.intersect(IntervalSet::above(xcut(s.l3[0][u])));
            s.l2[u] = ratio_threshold(mult * (g1.prob(x0) - g0.prob(x0)),
                                      g1.prob(x1) - g0.prob(x1), deg);
        }
        return s;
    };

    // Pure re-evaluation of every formula at a state.
    const auto formulas = [&](const InteractiveState& s) {
        InteractiveState t = s;
        int deg = 0;
        const double alpha0 = ytail(0, s.l2[0]), alpha1 = ytail(0, s.l2[1]);
        const double beta0 = ytail(1, s.l2[0]), beta1 = ytail(1, s.l2[1]);
        for (int u = 0; u < 2; ++u) {
            const double au = u == 0 ? alpha0 : alpha1;
            const double bu = u == 0 ? beta0 : beta1;
            t.l3[1][u] = ratio_threshold(mult * au, bu, deg);
            t.l3[0][u] = ratio_threshold(mult * (1.0 - au), 1.0 - bu, deg);
        }
        t.l1 = ratio_threshold(mult * (alpha1 - alpha0), beta1 - beta0, deg);
        const IntervalSet rw1 = final_region(s, 1), rw0 = final_region(s, 0);
        const IntervalSet lr_above = IntervalSet::above(xcut(s.l1));
        t.ru1 = rw1.intersect(rw0.complement())
                    .intersect(lr_above)
                    .unite(rw0.intersect(rw1.complement()).intersect(lr_above.complement()));
        for (int u = 0; u < 2; ++u) {
            const IntervalSet ru = u == 1 ? s.ru1 : s.ru1.complement();
            const IntervalSet g1 = ru.intersect(IntervalSet::above(xcut(s.l3[1][u])));
            const IntervalSet g0 = ru.intersect(IntervalSet::above(xcut(s.l3[0][u])));
            t.l2[u] = ratio_threshold(mult * (g1.prob(x0) - g0.prob(x0)),
                                      g1.prob(x1) - g0.prob(x1), deg);
        }
        return t;
    };
    const auto scalar_residual = [](const InteractiveState& s, const InteractiveState& t) {
        double r = rel_change(s.l1, t.l1);
        for (int u = 0; u < 2; ++u) {
            r = std::max(r, rel_change(s.l2[u], t.l2[u]));
            for (int v = 0; v < 2; ++v) r = std::max(r, rel_change(s.l3[v][u], t.l3[v][u]));
        }
        return r;
    };
    const auto metrics = [&](const InteractiveState& s, double& pf, double& pd) {
        pf = pd = 0.0;
        for (int u = 0; u < 2; ++u) {
            const IntervalSet ru = u == 1 ? s.ru1 : s.ru1.complement();
            const double au = ytail(0, s.l2[u]), bu = ytail(1, s.l2[u]);
            for (int v = 0; v < 2; ++v) {
                const IntervalSet gw = ru.intersect(IntervalSet::above(xcut(s.l3[v][u])));
                const double py0 = v == 1 ? au : 1.0 - au;
                const double py1 = v == 1 ? bu : 1.0 - bu;
                pf += py0 * gw.prob(x0);
                pd += py1 * gw.prob(x1);
            }
        }
    };

    // A one-way configuration embeds by sending u = 1 always; starting one
    // restart there makes the interactive optimum at least as good, since
    // every stage update is an exact conditional maximizer.
    const NpFixedResult tandem = solve_np_tandem(m, mult, cfg);

    std::optional<NpFixedResult> best;
    for (int r = 0; r < cfg.restarts; ++r) {
        InteractiveState s;
        if (r == 1) {
            s.ru1 = IntervalSet::all();
            s.l1 = mult;
            s.l2 = {mult, tandem.rules.thr[1][0]};
            s.l3 = {{{mult * std::exp(0.5), tandem.rules.thr[0][0]},
                     {mult * std::exp(-0.5), tandem.rules.thr[0][1]}}};
        } else if (r >= 2) {
            auto gen = restart_rng(cfg, r);
            s.ru1 = IntervalSet::above(xcut(mult * std::exp(uniform_pm1(gen))));
            s.l1 = mult * std::exp(uniform_pm1(gen));
            for (int u = 0; u < 2; ++u) {
                s.l2[u] = mult * std::exp(uniform_pm1(gen));
                for (int v = 0; v < 2; ++v) s.l3[v][u] = mult * std::exp(uniform_pm1(gen));
            }
        } else {
            s.ru1 = IntervalSet::above(xcut(mult));
            s.l1 = mult;
            s.l2 = {mult * std::exp(0.25), mult * std::exp(-0.25)};
            s.l3 = {{{mult * std::exp(0.5), mult * std::exp(0.5)},
                     {mult * std::exp(-0.5), mult * std::exp(-0.5)}}};
        }
        int degenerate = 0;
        bool converged = false;
        int it = 0;
        double residual = kInf;
        while (it < cfg.max_iter) {
            ++it;
            s = sweep(std::move(s), degenerate);
            const InteractiveState t = formulas(s);
            residual = scalar_residual(s, t);
            if (residual <= cfg.tol && s.ru1.almost_equal(t.ru1, cfg.tol)) {
                converged = true;
                break;
            }
        }
        NpFixedResult res;
        res.mult = mult;
        metrics(s, res.pf, res.pd);
        res.lagrangian = res.pd - mult * res.pf;
        res.converged = converged;
        res.iterations = it;
        res.fixed_point_residual = residual;
        InteractiveRules ir;
        ir.r_u1 = s.ru1;
        ir.first_stage_thr = s.l1;
        ir.y_thr = s.l2;
        ir.x_thr = {{{s.l3[0][0], s.l3[0][1]}, {s.l3[1][0], s.l3[1][1]}}};
        res.interactive = std::move(ir);
        if (!best || res.lagrangian > best->lagrangian) best = std::move(res);
    }
    return *best;
}

}  // namespace

NpFixedResult pbpo_np_fixed_multiplier(const WgnModel& m, FusionScheme scheme, double mult,
                                       const OptConfig& cfg) {
    validate(cfg);
    if (!(mult >= 0.0) || !std::isfinite(mult))
        throw ValidationError("multiplier must be finite and >= 0");
    switch (scheme) {
        case FusionScheme::single:
            if (m.sigma.empty()) throw ValidationError("single scheme needs one sensor");
            return solve_np_single(m, mult);
        case FusionScheme::tandem_yx:
            if (m.sigma.size() != 2)
                throw ValidationError("one-way scheme needs exactly two sensors");
            return solve_np_tandem(m, mult, cfg);
        case FusionScheme::interactive_xyx:
            if (m.sigma.size() != 2)
                throw ValidationError("interactive scheme needs exactly two sensors");
            return solve_np_interactive(m, mult, cfg);
    }
    throw ValidationError("unknown fusion scheme");
}

NpSolveResult np_solve(const WgnModel& m, FusionScheme scheme, double alpha,
                       const OptConfig& cfg) {
    validate(cfg);
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
    constexpr double kMultMax = 1e6;
    NpSolveResult out;
    out.alpha = alpha;

    const auto eval = [&](double mult) {
        ++out.outer_iterations;
        return pbpo_np_fixed_multiplier(m, scheme, mult, cfg);
    };
    const auto grid_fallback = [&]() -> NpSolveResult {
        out.used_grid_fallback = true;
        std::optional<NpFixedResult> bestf;
        for (int i = 0; i < 64; ++i) {
            const double mult = i == 0 ? 0.0 : std::pow(10.0, -6.0 + 12.0 * (i - 1) / 62.0);
            NpFixedResult r = eval(mult);
            if (r.pf <= alpha + cfg.np_pf_tol && (!bestf || r.pd > bestf->pd))
                bestf = std::move(r);
        }
        if (!bestf)
            throw InfeasibleConstraintError("no multiplier in [0, 1e6] meets the false-alarm "
                                            "ceiling");
        out.best = std::move(*bestf);
        return out;
    };

    NpFixedResult lo_r = eval(0.0);
    if (std::abs(lo_r.pf - alpha) <= cfg.np_pf_tol) {
        out.best = std::move(lo_r);
        return out;
    }
    NpFixedResult hi_r = eval(kMultMax);
    if (hi_r.pf > alpha + cfg.np_pf_tol)
        throw InfeasibleConstraintError(
            "false-alarm ceiling " + std::to_string(alpha) +
            " unreachable: P_f at the bracket end is " + std::to_string(hi_r.pf));
    double lo = 0.0, hi = kMultMax;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        NpFixedResult r = eval(mid);
        if (r.pf > lo_r.pf + 1e-9 || r.pf < hi_r.pf - 1e-9) return grid_fallback();
        if (std::abs(r.pf - alpha) <= cfg.np_pf_tol) {
            out.best = std::move(r);
            return out;
        }
        if (r.pf > alpha) {
            lo = mid;
            lo_r = std::move(r);
        } else {
            hi = mid;
            hi_r = std::move(r);
        }
    }
    out.best = std::move(hi_r);  // feasible side of the collapsed bracket
    return out;
}

// ---------------------------------------------------------------------------
// Coordinate search.

namespace {

struct RunOutcome {
    std::vector<double> x;
    double value = kInf;  // internal minimization value
    bool converged = false;
    int iterations = 0;
    double last_improvement = 0.0;
};

}  // namespace

SearchResult coordinate_search(const std::function<double(const std::vector<double>&)>& objective,
                               const SearchBox& box, SearchDirection dir, const OptConfig& cfg) {
    validate(cfg);
    const std::size_t dim = box.lo.size();
    if (dim == 0 || box.hi.size() != dim || box.init.size() != dim)
        throw ValidationError("search box needs matching non-empty lo/hi/init");
    for (std::size_t i = 0; i < dim; ++i) {
        if (!(box.lo[i] <= box.hi[i])) throw ValidationError("search box needs lo <= hi");
        if (!(box.init[i] >= box.lo[i]) || !(box.init[i] <= box.hi[i]))
            throw ValidationError("search start must lie inside the box");
    }
    const auto f = [&](const std::vector<double>& x) {
        const double v = objective(x);
        return dir == SearchDirection::maximize ? -v : v;
    };
    constexpr double kGolden = 0.6180339887498948;

    std::optional<RunOutcome> best;
    for (int r = 0; r < cfg.restarts; ++r) {
        RunOutcome run;
        run.x = box.init;
        if (r > 0) {
            auto gen = restart_rng(cfg, r);
            for (std::size_t i = 0; i < dim; ++i)
                run.x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * uniform01(gen);
        }
        run.value = f(run.x);
        while (run.iterations < cfg.max_iter) {
            ++run.iterations;
            double improvement = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                if (box.lo[i] == box.hi[i]) continue;
                const double span = box.hi[i] - box.lo[i];
                double cand_x = run.x[i], cand_v = run.value;
                const auto probe = [&](double xi) {
                    run.x[i] = xi;
                    const double v = f(run.x);
                    if (v < cand_v) {
                        cand_v = v;
                        cand_x = xi;
                    }
                    return v;
                };
                int jbest = 0;
                double vbest = kInf;
                for (int j = 0; j < cfg.grid_points; ++j) {
                    const double v = probe(box.lo[i] + span * j / (cfg.grid_points - 1));
                    if (v < vbest) {
                        vbest = v;
                        jbest = j;
                    }
                }
                double a = box.lo[i] + span * std::max(0, jbest - 1) / (cfg.grid_points - 1);
                double b = box.lo[i] +
                           span * std::min(cfg.grid_points - 1, jbest + 1) / (cfg.grid_points - 1);
                double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
                double fc = probe(c), fd = probe(d);
                while (b - a > cfg.tol) {
                    if (fc < fd) {
                        b = d;
                        d = c;
                        fd = fc;
                        c = b - kGolden * (b - a);
                        fc = probe(c);
                    } else {
                        a = c;
                        c = d;
                        fc = fd;
                        d = a + kGolden * (b - a);
                        fd = probe(d);
                    }
                }
                improvement += run.value - cand_v;
                run.x[i] = cand_x;
                run.value = cand_v;
            }
            run.last_improvement = improvement;
            if (improvement <= cfg.tol) {
                run.converged = true;
                break;
            }
        }
        if (!best || run.value < best->value) best = std::move(run);
    }
    SearchResult res;
    res.x = std::move(best->x);
    res.value = dir == SearchDirection::maximize ? -best->value : best->value;
    res.converged = best->converged;
    res.iterations = best->iterations;
    res.last_improvement = best->last_improvement;
    return res;
}

// ---------------------------------------------------------------------------
// Search-based Bayes optimizers (cut-point coordinates).

namespace {

OptResult bayes_search_core(const Dag& d, const WgnModel& m, const CostMatrix& cost,
                            double prior1, const ChannelSet* channels, const OptConfig& cfg) {
    if (static_cast<int>(m.sigma.size()) != d.n())
        throw ValidationError("model size must match network size");
    const double lam0 = bayes_lrt_threshold(cost, prior1);
    SearchBox box;
    std::vector<std::pair<int, std::size_t>> slots;  // (node, context)
    for (int k = 1; k <= d.n(); ++k) {
        const std::size_t ctxs = std::size_t{1} << d.in_degree(k);
        const Gaussian1D g0 = m.h0(k), g1 = m.h1(k);
        const double sd = g0.sd();
        const double init = std::clamp(lrt_cut_point(lam0, g0, g1), g0.mean - 8.0 * sd,
                                       g1.mean + 8.0 * sd);
        for (std::size_t c = 0; c < ctxs; ++c) {
            slots.emplace_back(k, c);
            box.lo.push_back(g0.mean - 8.0 * sd);
            box.hi.push_back(g1.mean + 8.0 * sd);
            box.init.push_back(init);
        }
    }
    RegionProbs rp;
    for (int h = 0; h < 2; ++h) {
        rp.p[h].resize(d.n());
        for (int k = 1; k <= d.n(); ++k)
            rp.p[h][k - 1].assign(std::size_t{1} << d.in_degree(k), 0.0);
    }
    const auto fill_probs = [&](const std::vector<double>& cuts, RegionProbs& out) {
        for (std::size_t s = 0; s < slots.size(); ++s) {
            const auto [k, c] = slots[s];
            out.p[0][k - 1][c] = upper_tail(m.h0(k), cuts[s]);
            out.p[1][k - 1][c] = upper_tail(m.h1(k), cuts[s]);
        }
    };
    const auto objective = [&](const std::vector<double>& cuts) {
        fill_probs(cuts, rp);
        return channels ? bayes_risk_with_channels(d, cost, prior1, rp, *channels)
                        : bayes_risk(d, cost, prior1, rp);
    };
    const SearchResult sr =
        coordinate_search(objective, box, SearchDirection::minimize, cfg);

    OptResult res;
    res.rules.thr.resize(d.n());
    for (int k = 1; k <= d.n(); ++k)
        res.rules.thr[k - 1].assign(std::size_t{1} << d.in_degree(k), 0.0);
    for (std::size_t s = 0; s < sr.x.size(); ++s) {
        const auto [k, c] = slots[s];
        const Gaussian1D g0 = m.h0(k), g1 = m.h1(k);
        // Equal-variance likelihood ratio evaluated at the cut point.
        res.rules.thr[k - 1][c] =
            std::exp((sr.x[s] - 0.5 * (g0.mean + g1.mean)) * (g1.mean - g0.mean) / g0.variance);
    }
    fill_probs(sr.x, rp);
    res.region_probs = rp;
    res.objective_value = sr.value;
    res.converged = sr.converged;
    res.iterations = sr.iterations;
    res.fixed_point_residual = sr.last_improvement;
    return res;
}

}  // namespace

OptResult optimize_bayes_search(const Dag& d, const WgnModel& m, const CostMatrix& cost,
                                double prior1, const OptConfig& cfg) {
    return bayes_search_core(d, m, cost, prior1, nullptr, cfg);
}

OptResult optimize_bayes_channels_search(const Dag& d, const WgnModel& m, const CostMatrix& cost,
                                         double prior1, const ChannelSet& channels,
                                         const OptConfig& cfg) {
    return bayes_search_core(d, m, cost, prior1, &channels, cfg);
}

CorrelatedOptResult optimize_correlated(const CorrelatedModel& m, double prior1,
                                        const OptConfig& cfg, const QuadratureSpec& quad) {
    if (!(prior1 > 0.0) || !(prior1 < 1.0))
        throw ValidationError("prior must lie strictly in (0,1)");
    const double sy = std::sqrt(m.sigma_s2 + m.lam);
    const double sx = std::sqrt(m.sigma_s2 + m.tau);
    const auto thresholds_from = [&](const std::vector<double>& z) {
        CorrelatedThresholds th;
        const double wy = 0.5 * std::exp(z[1]), w0 = 0.5 * std::exp(z[3]),
                     w1 = 0.5 * std::exp(z[5]);
        th.t_minus = z[0] - wy;
        th.t_plus = z[0] + wy;
        th.T0_minus = z[2] - w0;
        th.T0_plus = z[2] + w0;
        th.T1_minus = z[4] - w1;
        th.T1_plus = z[4] + w1;
        return th;
    };
    SearchBox box;
    for (int stage = 0; stage < 3; ++stage) {
        const double s = stage == 0 ? sy : sx;
        box.lo.push_back(std::min(0.0, m.mu) - 10.0 * s);
        box.hi.push_back(std::max(0.0, m.mu) + 10.0 * s);
        box.init.push_back(0.5 * m.mu);
        box.lo.push_back(std::log(1e-4));
        box.hi.push_back(std::log(44.0 * s));
        box.init.push_back(std::log(10.0 * s));
    }
    const auto objective = [&](const std::vector<double>& z) {
        return correlated_error_prob(m, thresholds_from(z), prior1, quad);
    };
    const SearchResult sr = coordinate_search(objective, box, SearchDirection::minimize, cfg);
    CorrelatedOptResult res;
    res.th = thresholds_from(sr.x);
    res.pe = sr.value;
    res.converged = sr.converged;
    res.iterations = sr.iterations;
    return res;
}

// ---------------------------------------------------------------------------
// Quantized exhaustive oracle.

QuantizedBrute brute_force_oracle(const Dag& d, const WgnModel& m, const CostMatrix& cost,
                                  double prior1, int cells) {
    if (static_cast<int>(m.sigma.size()) != d.n())
        throw ValidationError("model size must match network size");
    if (cells < 2) throw ValidationError("need at least 2 cells");
    if (d.n() > 2 || cells > 12)
        throw BudgetError("exhaustive labeling enumeration supports at most two nodes and 12 "
                          "cells; got " + std::to_string(d.n()) + " nodes, " +
                          std::to_string(cells) + " cells");
    const int n = d.n();
    std::vector<int> table_bits(n);
    int total_bits = 0;
    for (int k = 1; k <= n; ++k) {
        table_bits[k - 1] = cells << d.in_degree(k);
        total_bits += table_bits[k - 1];
    }
    if (total_bits > 22)
        throw BudgetError("labeling space 2^" + std::to_string(total_bits) +
                          " exceeds the enumeration budget (2^22)");

    // Cell probabilities: outer cells are the tails beyond [mu0-4s, mu1+4s];
    // interior boundaries split that span evenly.
    std::vector<std::vector<std::array<double, 2>>> cellp(n);
    for (int k = 1; k <= n; ++k) {
        const Gaussian1D g0 = m.h0(k), g1 = m.h1(k);
        const double lo = g0.mean - 4.0 * g0.sd(), hi = g1.mean + 4.0 * g1.sd();
        std::vector<double> bounds;  // cells+1 entries including the infinities
        bounds.push_back(-kInf);
        if (cells == 2) {
            bounds.push_back(0.5 * (lo + hi));
        } else {
            for (int j = 0; j <= cells - 2; ++j)
                bounds.push_back(lo + (hi - lo) * j / (cells - 2));
        }
        bounds.push_back(kInf);
        cellp[k - 1].resize(cells);
        for (int c = 0; c < cells; ++c) {
            cellp[k - 1][c] = {upper_tail(g0, bounds[c]) - upper_tail(g0, bounds[c + 1]),
                               upper_tail(g1, bounds[c]) - upper_tail(g1, bounds[c + 1])};
        }
    }

    RegionProbs rp;
    for (int h = 0; h < 2; ++h) {
        rp.p[h].resize(n);
        for (int k = 1; k <= n; ++k)
            rp.p[h][k - 1].assign(std::size_t{1} << d.in_degree(k), 0.0);
    }
    // labels for node k start at bit offset[k-1]; within a table the bit for
    // (context, cell) is context*cells + cell.
    std::vector<int> offset(n, 0);
    for (int k = 2; k <= n; ++k) offset[k - 1] = offset[k - 2] + table_bits[k - 2];
    const auto risk_of = [&](std::uint64_t labeling) {
        for (int k = 1; k <= n; ++k) {
            const std::size_t ctxs = std::size_t{1} << d.in_degree(k);
            for (std::size_t c = 0; c < ctxs; ++c) {
                double p0 = 0.0, p1 = 0.0;
                for (int cell = 0; cell < cells; ++cell) {
                    if (labeling >> (offset[k - 1] + c * cells + cell) & 1u) {
                        p0 += cellp[k - 1][cell][0];
                        p1 += cellp[k - 1][cell][1];
                    }
                }
                rp.p[0][k - 1][c] = p0;
                rp.p[1][k - 1][c] = p1;
            }
        }
        return bayes_risk(d, cost, prior1, rp);
    };

    QuantizedBrute out;
    out.best_value = kInf;
    std::uint64_t best_labeling = 0;
    for (std::uint64_t L = 0; L < (std::uint64_t{1} << total_bits); ++L) {
        const double v = risk_of(L);
        if (v < out.best_value) {
            out.best_value = v;
            best_labeling = L;
        }
    }

    // Relabeling a peripheral's message symbol (with the parent's context
    // blocks swapped to match) produces an equal-risk twin, so the first
    // labeling attaining the optimum need not be monotone. Among exactly tied
    // optima, report a monotone witness when one exists.
    const auto is_monotone = [&](std::uint64_t labeling) {
        for (int k = 1; k <= n; ++k) {
            const std::size_t ctxs = std::size_t{1} << d.in_degree(k);
            for (std::size_t c = 0; c < ctxs; ++c)
                for (int cell = 0; cell + 1 < cells; ++cell)
                    if ((labeling >> (offset[k - 1] + c * cells + cell) & 1u) >
                        (labeling >> (offset[k - 1] + c * cells + cell + 1) & 1u))
                        return false;
        }
        return true;
    };
    if (!is_monotone(best_labeling)) {
        for (std::uint64_t L = 0; L < (std::uint64_t{1} << total_bits); ++L) {
            if (!is_monotone(L)) continue;
            if (risk_of(L) == out.best_value) {
                best_labeling = L;
                break;
            }
        }
    }

    // Optimum over per-(node, context) suffix labelings: the top s cells (in
    // likelihood-ratio order, which equals cell order here) decide 1.
    std::vector<std::size_t> ctx_count(n);
    std::size_t combos = 1;
    for (int k = 1; k <= n; ++k) {
        ctx_count[k - 1] = std::size_t{1} << d.in_degree(k);
        for (std::size_t c = 0; c < ctx_count[k - 1]; ++c) combos *= cells + 1;
    }
    out.threshold_rule_value = kInf;
    for (std::size_t combo = 0; combo < combos; ++combo) {
        std::uint64_t labeling = 0;
        std::size_t rest = combo;
        for (int k = 1; k <= n; ++k) {
            for (std::size_t c = 0; c < ctx_count[k - 1]; ++c) {
                const int ones = static_cast<int>(rest % (cells + 1));
                rest /= cells + 1;
                for (int cell = cells - ones; cell < cells; ++cell)
                    labeling |= std::uint64_t{1} << (offset[k - 1] + c * cells + cell);
            }
        }
        out.threshold_rule_value = std::min(out.threshold_rule_value, risk_of(labeling));
    }

    out.labels.resize(n);
    out.best_is_monotone = true;
    for (int k = 1; k <= n; ++k) {
        out.labels[k - 1].resize(table_bits[k - 1]);
        for (int b = 0; b < table_bits[k - 1]; ++b)
            out.labels[k - 1][b] =
                static_cast<std::uint8_t>(best_labeling >> (offset[k - 1] + b) & 1u);
        for (std::size_t c = 0; c < ctx_count[k - 1]; ++c)
            for (int cell = 0; cell + 1 < cells; ++cell)
                if (out.labels[k - 1][c * cells + cell] >
                    out.labels[k - 1][c * cells + cell + 1])
                    out.best_is_monotone = false;
    }
    return out;
}

}  // namespace detnet
