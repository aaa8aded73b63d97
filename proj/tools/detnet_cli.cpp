// Command-line front end: network/model file parsing, rule optimization,
// parameter sweeps emitted as CSV curve data, and comparison studies.
//
// Exit codes: 0 success; 2 validation/parse errors (including infeasible
// constraints and enumeration budgets); 3 optimizer non-convergence under
// --strict (and hard numeric-convergence failures); 4 verification failure
// under --verify.  Informational logs go to standard error only.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "detnet/asymptotics.hpp"
#include "detnet/errors.hpp"
#include "detnet/gauss.hpp"
#include "detnet/io.hpp"
#include "detnet/models.hpp"
#include "detnet/objectives.hpp"
#include "detnet/optimizer.hpp"

namespace {

using namespace detnet;

constexpr int kExitValidation = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitVerifyFail = 4;

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VerifyFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 12 significant digits, '.' decimal separator, locale-independent.
std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct CommonOpts {
    double tol = 1e-8;
    int max_iter = 500;
    int restarts = 8;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out;
    std::string dat;
    bool verify = false;
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--tol", o.tol, "convergence tolerance");
    cmd->add_option("--max-iter", o.max_iter, "iteration budget per start");
    cmd->add_option("--restarts", o.restarts, "multi-start count");
    cmd->add_option("--seed", o.seed, "rng seed for perturbed restarts");
    cmd->add_option("--jobs", o.jobs, "worker threads for sweep points")
        ->check(CLI::Range(1, 256));
    cmd->add_option("--out", o.out, "write the CSV table to this path");
    cmd->add_option("--dat", o.dat, "also write a gnuplot-ready twin table");
    cmd->add_flag("--verify", o.verify, "enforce the documented inequalities (exit 4)");
    cmd->add_flag("--strict", o.strict, "fail (exit 3) if any point did not converge");
}

OptConfig make_cfg(const CommonOpts& o) {
    OptConfig cfg;
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    cfg.restarts = o.restarts;
    cfg.rng_seed = o.seed;
    return cfg;
}

struct SweepSpec {
    std::string variable;
    double lo = 0.0, hi = 1.0;
    int steps = 2;

    double value(int i) const { return lo + (hi - lo) * i / (steps - 1); }
};

SweepSpec parse_sweep(const std::string& text, const std::string& expected_var) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ':')) parts.push_back(token);
    if (parts.size() != 4)
        throw ValidationError("--sweep expects var:lo:hi:steps, got '" + text + "'");
    SweepSpec s;
    s.variable = parts[0];
    try {
        s.lo = std::stod(parts[1]);
        s.hi = std::stod(parts[2]);
        s.steps = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw ValidationError("--sweep expects numeric lo:hi:steps, got '" + text + "'");
    }
    if (s.variable != expected_var)
        throw ValidationError("this command sweeps '" + expected_var + "', got '" +
                              s.variable + "'");
    if (!(s.lo < s.hi)) throw ValidationError("--sweep needs lo < hi");
    if (s.steps < 2) throw ValidationError("--sweep needs steps >= 2");
    return s;
}

// CSV table buffered in sweep order; header fixed up front.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const {
        std::ostringstream out;
        for (std::size_t i = 0; i < header.size(); ++i)
            out << (i ? "," : "") << header[i];
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
            out << "\n";
        }
        return out.str();
    }

    std::string dat() const {
        std::ostringstream out;
        out << "#";
        for (const auto& h : header) out << " " << h;
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
            out << "\n";
        }
        return out.str();
    }
};

void emit_table(const Table& t, const CommonOpts& o) {
    const std::string body = t.csv();
    if (o.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw ValidationError(o.out + ": cannot open for writing");
        f << body;
    }
    if (!o.dat.empty()) {
        std::ofstream f(o.dat, std::ios::binary);
        if (!f) throw ValidationError(o.dat + ": cannot open for writing");
        f << t.dat();
    }
}

// Runs fn(i) for i in [0, count) on o.jobs threads; any exception is
// re-thrown on the caller after all workers finish.  Row order is the
// caller's responsibility (each fn(i) writes slot i).
void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::vector<std::thread> pool;
    const int workers = std::min(jobs, count);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

double prior_of(const NetworkFile& nf, const std::optional<double>& flag) {
    if (flag) return *flag;
    if (nf.prior1) return *nf.prior1;
    throw ValidationError("no prior: give one in the file or with --prior");
}

CostMatrix cost_of(const NetworkFile& nf, const std::vector<double>& flag) {
    if (!flag.empty()) {
        if (flag.size() != 4)
            throw ValidationError("--cost expects c00,c01,c10,c11");
        return {flag[0], flag[1], flag[2], flag[3]};
    }
    if (nf.cost) return *nf.cost;
    return CostMatrix::zero_one();
}

// ---------------------------------------------------------------------------
// threshold-count

int cmd_threshold_count(const std::string& file) {
    const NetworkFile nf = load_network_file(file);
    std::cout << threshold_count(nf.dag) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// optimize

int cmd_optimize(const std::string& file, const std::string& objective,
                 const std::optional<double>& prior_flag, const std::vector<double>& cost_flag,
                 const std::optional<double>& alpha, bool interactive, const CommonOpts& o) {
    const NetworkFile nf = load_network_file(file);
    const OptConfig cfg = make_cfg(o);
    Table t;

    if (objective == "bayes") {
        if (!nf.wgn) throw ValidationError(file + ": 'model wgn' required for bayes");
        const double prior1 = prior_of(nf, prior_flag);
        const CostMatrix cost = cost_of(nf, cost_flag);
        const OptResult res = pbpo_bayes(nf.dag, *nf.wgn, cost, prior1, cfg);
        std::cout << "objective bayes\n"
                  << "risk " << fmt12(res.objective_value) << "\n"
                  << "converged " << (res.converged ? 1 : 0) << "\n"
                  << "iterations " << res.iterations << "\n"
                  << "residual " << fmt12(res.fixed_point_residual) << "\n"
                  << "degenerate_updates " << res.degenerate_ratio_count << "\n";
        t.header = {"node", "context", "threshold", "p0_u1", "p1_u1"};
        for (int k = 1; k <= nf.dag.n(); ++k)
            for (std::size_t c = 0; c < res.rules.thr[k - 1].size(); ++c) {
                std::cout << "node " << k << " context " << c << " threshold "
                          << fmt12(res.rules.thr[k - 1][c]) << " p0 "
                          << fmt12(res.region_probs.p[0][k - 1][c]) << " p1 "
                          << fmt12(res.region_probs.p[1][k - 1][c]) << "\n";
                t.rows.push_back({std::to_string(k), std::to_string(c),
                                  fmt12(res.rules.thr[k - 1][c]),
                                  fmt12(res.region_probs.p[0][k - 1][c]),
                                  fmt12(res.region_probs.p[1][k - 1][c])});
            }
        if (!o.out.empty() || !o.dat.empty()) emit_table(t, o);
        if (o.strict && !res.converged) throw NonConvergence("bayes optimization");
        if (o.verify && !res.converged) throw VerifyFailure("bayes result not converged");
        return 0;
    }

    if (objective == "pe") {
        if (!nf.corr) throw ValidationError(file + ": 'model corr' required for pe");
        const double prior1 = prior_of(nf, prior_flag);
        const CorrelatedOptResult res = optimize_correlated(*nf.corr, prior1, cfg);
        std::cout << "objective pe\n"
                  << "pe " << fmt12(res.pe) << "\n"
                  << "converged " << (res.converged ? 1 : 0) << "\n"
                  << "iterations " << res.iterations << "\n"
                  << "t_minus " << fmt12(res.th.t_minus) << "\nt_plus " << fmt12(res.th.t_plus)
                  << "\nT0_minus " << fmt12(res.th.T0_minus) << "\nT0_plus "
                  << fmt12(res.th.T0_plus) << "\nT1_minus " << fmt12(res.th.T1_minus)
                  << "\nT1_plus " << fmt12(res.th.T1_plus) << "\n";
        t.header = {"pe", "t_minus", "t_plus", "T0_minus", "T0_plus", "T1_minus", "T1_plus",
                    "converged"};
        t.rows.push_back({fmt12(res.pe), fmt12(res.th.t_minus), fmt12(res.th.t_plus),
                          fmt12(res.th.T0_minus), fmt12(res.th.T0_plus), fmt12(res.th.T1_minus),
                          fmt12(res.th.T1_plus), res.converged ? "1" : "0"});
        if (!o.out.empty() || !o.dat.empty()) emit_table(t, o);
        if (o.strict && !res.converged) throw NonConvergence("pe optimization");
        if (o.verify && !res.converged) throw VerifyFailure("pe result not converged");
        return 0;
    }

    if (objective == "np") {
        if (!nf.wgn) throw ValidationError(file + ": 'model wgn' required for np");
        if (!alpha) throw ValidationError("np needs --alpha");
        FusionScheme scheme;
        if (nf.dag.n() == 1) {
            scheme = FusionScheme::single;
        } else if (nf.dag.n() == 2) {
            scheme = interactive ? FusionScheme::interactive_xyx : FusionScheme::tandem_yx;
        } else {
            throw ValidationError("np supports 1- or 2-sensor networks");
        }
        const NpSolveResult res = np_solve(*nf.wgn, scheme, *alpha, cfg);
        std::cout << "objective np\n"
                  << "alpha " << fmt12(*alpha) << "\n"
                  << "mult " << fmt12(res.best.mult) << "\n"
                  << "pf " << fmt12(res.best.pf) << "\n"
                  << "pd " << fmt12(res.best.pd) << "\n"
                  << "lagrangian " << fmt12(res.best.lagrangian) << "\n"
                  << "converged " << (res.best.converged ? 1 : 0) << "\n"
                  << "outer_iterations " << res.outer_iterations << "\n"
                  << "grid_fallback " << (res.used_grid_fallback ? 1 : 0) << "\n";
        t.header = {"alpha", "mult", "pf", "pd", "lagrangian", "converged"};
        t.rows.push_back({fmt12(*alpha), fmt12(res.best.mult), fmt12(res.best.pf),
                          fmt12(res.best.pd), fmt12(res.best.lagrangian),
                          res.best.converged ? "1" : "0"});
        for (std::size_t k = 0; k < res.best.rules.thr.size(); ++k)
            for (std::size_t c = 0; c < res.best.rules.thr[k].size(); ++c)
                std::cout << "node " << k + 1 << " context " << c << " threshold "
                          << fmt12(res.best.rules.thr[k][c]) << "\n";
        if (res.best.interactive) {
            const InteractiveRules& ir = *res.best.interactive;
            std::cout << "first_stage_thr " << fmt12(ir.first_stage_thr) << "\n";
            for (int u = 0; u < 2; ++u)
                std::cout << "y_thr_u" << u << " " << fmt12(ir.y_thr[u]) << "\n";
            for (int v = 0; v < 2; ++v)
                for (int u = 0; u < 2; ++u)
                    std::cout << "x_thr_v" << v << "_u" << u << " " << fmt12(ir.x_thr[v][u])
                              << "\n";
            std::cout << "first_stage_region";
            for (const auto& part : ir.r_u1.parts())
                std::cout << " [" << fmt12(part.lo) << "," << fmt12(part.hi) << ")";
            std::cout << "\n";
        }
        if (!o.out.empty() || !o.dat.empty()) emit_table(t, o);
        if (o.strict && !res.best.converged) throw NonConvergence("np optimization");
        if (o.verify && std::abs(res.best.pf - *alpha) > 10.0 * cfg.np_pf_tol)
            throw VerifyFailure("np false-alarm rate misses the ceiling");
        return 0;
    }

    if (objective == "kl") {
        if (!nf.wgn) throw ValidationError(file + ": 'model wgn' required for kl");
        if (nf.wgn->sigma.size() != 2) throw ValidationError("kl needs exactly two sensors");
        const KlYxResult yx = maximize_kl_yx(*nf.wgn, cfg);
        const KlXyxResult xyx = maximize_kl_xyx(*nf.wgn, cfg);
        std::cout << "objective kl\n"
                  << "k_yx " << fmt12(yx.k_max) << "\n"
                  << "k_xyx " << fmt12(xyx.k_max) << "\n"
                  << "thr_yx " << fmt12(yx.thr) << "\n"
                  << "alpha " << fmt12(yx.alpha) << "\n"
                  << "beta " << fmt12(yx.beta) << "\n"
                  << "a1 " << fmt12(xyx.a1) << "\n"
                  << "thr_xyx_u0 " << fmt12(xyx.thr[0]) << "\n"
                  << "thr_xyx_u1 " << fmt12(xyx.thr[1]) << "\n"
                  << "converged " << ((yx.converged && xyx.converged) ? 1 : 0) << "\n";
        t.header = {"k_yx", "k_xyx", "thr_yx", "thr_xyx_u0", "thr_xyx_u1", "alpha", "beta",
                    "a1", "converged"};
        t.rows.push_back({fmt12(yx.k_max), fmt12(xyx.k_max), fmt12(yx.thr), fmt12(xyx.thr[0]),
                          fmt12(xyx.thr[1]), fmt12(yx.alpha), fmt12(yx.beta), fmt12(xyx.a1),
                          (yx.converged && xyx.converged) ? "1" : "0"});
        if (!o.out.empty() || !o.dat.empty()) emit_table(t, o);
        if (o.strict && !(yx.converged && xyx.converged))
            throw NonConvergence("kl maximization");
        if (o.verify && std::abs(yx.k_max - xyx.k_max) > 1e-6)
            throw VerifyFailure("one-way and interactive exponents disagree");
        return 0;
    }

    throw ValidationError("unknown objective '" + objective + "' (bayes|pe|np|kl)");
}

// ---------------------------------------------------------------------------
// np-curve

int cmd_np_curve(double alpha, double sigma_y, const std::string& sweep_text,
                 const CommonOpts& o) {
    const SweepSpec sweep = parse_sweep(sweep_text, "sigma_x");
    OptConfig cfg = make_cfg(o);
    cfg.np_pf_tol = 1e-9;  // curve comparisons need matched false-alarm rates

    Table t;
    t.header = {"sigma_x", "pd_yx", "pd_xyx", "pd_central", "converged_yx", "converged_xyx"};
    t.rows.resize(static_cast<std::size_t>(sweep.steps));
    parallel_for(sweep.steps, o.jobs, [&](int i) {
        const double sx = sweep.value(i);
        const WgnModel m = n_sensor_wgn({sx, sigma_y});
        const NpSolveResult yx = np_solve(m, FusionScheme::tandem_yx, alpha, cfg);
        const NpSolveResult xyx = np_solve(m, FusionScheme::interactive_xyx, alpha, cfg);
        const CentralizedNp central = centralized_np(sx, sigma_y, alpha);
        t.rows[static_cast<std::size_t>(i)] = {
            fmt12(sx), fmt12(yx.best.pd), fmt12(xyx.best.pd), fmt12(central.pd),
            yx.best.converged ? "1" : "0", xyx.best.converged ? "1" : "0"};
        std::cerr << "np-curve: sigma_x=" << fmt12(sx) << " done\n";
    });
    emit_table(t, o);

    if (o.strict)
        for (const auto& row : t.rows)
            if (row[4] == "0" || row[5] == "0") throw NonConvergence("np-curve point");
    if (o.verify) {
        double max_gap = 0.0;
        for (const auto& row : t.rows) {
            const double pd_yx = std::stod(row[1]), pd_xyx = std::stod(row[2]),
                         pd_central = std::stod(row[3]);
            if (pd_yx > pd_xyx + 1e-6 || pd_xyx > pd_central + 1e-6)
                throw VerifyFailure("detection-probability ordering violated at sigma_x=" +
                                    row[0]);
            max_gap = std::max(max_gap, pd_xyx - pd_yx);
        }
        if (!(max_gap > 1e-4))
            throw VerifyFailure("interactive improvement never exceeds 1e-4");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// kl-curve

int cmd_kl_curve(double sigma_y, const std::string& sweep_text, const CommonOpts& o) {
    const SweepSpec sweep = parse_sweep(sweep_text, "sigma_x");
    const OptConfig cfg = make_cfg(o);

    Table t;
    t.header = {"sigma_x", "k_yx", "k_xyx", "k_xy", "k_yxy", "converged"};
    t.rows.resize(static_cast<std::size_t>(sweep.steps));
    parallel_for(sweep.steps, o.jobs, [&](int i) {
        const double sx = sweep.value(i);
        const WgnModel fwd = n_sensor_wgn({sx, sigma_y});   // final decision at X
        const WgnModel rev = n_sensor_wgn({sigma_y, sx});   // final decision at Y
        const KlYxResult yx = maximize_kl_yx(fwd, cfg);
        const KlXyxResult xyx = maximize_kl_xyx(fwd, cfg);
        const KlYxResult xy = maximize_kl_yx(rev, cfg);
        const KlXyxResult yxy = maximize_kl_xyx(rev, cfg);
        const bool ok = yx.converged && xyx.converged && xy.converged && yxy.converged;
        t.rows[static_cast<std::size_t>(i)] = {fmt12(sx),        fmt12(yx.k_max),
                                               fmt12(xyx.k_max), fmt12(xy.k_max),
                                               fmt12(yxy.k_max), ok ? "1" : "0"};
    });
    emit_table(t, o);

    if (o.strict)
        for (const auto& row : t.rows)
            if (row[5] == "0") throw NonConvergence("kl-curve point");
    if (o.verify) {
        for (const auto& row : t.rows) {
            const double sx = std::stod(row[0]);
            const double k_yx = std::stod(row[1]), k_xyx = std::stod(row[2]);
            const double k_xy = std::stod(row[3]), k_yxy = std::stod(row[4]);
            if (std::abs(k_yx - k_xyx) > 1e-6 || std::abs(k_xy - k_yxy) > 1e-6)
                throw VerifyFailure("interaction changed an exponent at sigma_x=" + row[0]);
            if (std::abs(sx - sigma_y) <= 1e-12) {
                if (std::abs(k_yx - k_xy) > 1e-6)
                    throw VerifyFailure("curves fail to cross at sigma_x=sigma_y");
            } else if (sx < sigma_y ? !(k_yx > k_xy) : !(k_yx < k_xy)) {
                throw VerifyFailure("final decision at the better sensor should win at "
                                    "sigma_x=" + row[0]);
            }
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// compare-direction

int cmd_compare_direction(double mu, const std::vector<double>& sigma_s_list, double lam,
                          double prior1, const std::string& sweep_text, const CommonOpts& o) {
    if (sigma_s_list.empty()) throw ValidationError("--sigma-s needs at least one value");
    const SweepSpec sweep = parse_sweep(sweep_text, "tau");
    const OptConfig cfg = make_cfg(o);

    Table t;
    t.header = {"tau"};
    for (double s : sigma_s_list) {
        t.header.push_back("pe_yx_ss" + fmt12(s));
        t.header.push_back("pe_xy_ss" + fmt12(s));
    }
    t.rows.resize(static_cast<std::size_t>(sweep.steps));
    parallel_for(sweep.steps, o.jobs, [&](int i) {
        const double tau = sweep.value(i);
        std::vector<std::string> row{fmt12(tau)};
        for (double s : sigma_s_list) {
            const double s2 = s * s;
            // XY (final decision at the y sensor) is YX on the noise-swapped
            // model, so both directions share one evaluator.
            const CorrelatedOptResult yx =
                optimize_correlated(CorrelatedModel(mu, s2, tau, lam), prior1, cfg);
            const CorrelatedOptResult xy =
                optimize_correlated(CorrelatedModel(mu, s2, lam, tau), prior1, cfg);
            row.push_back(fmt12(yx.pe));
            row.push_back(fmt12(xy.pe));
        }
        t.rows[static_cast<std::size_t>(i)] = std::move(row);
        std::cerr << "compare-direction: tau=" << fmt12(tau) << " done\n";
    });
    emit_table(t, o);

    if (o.verify) {
        const double tie_tol = 1e-12 * std::max(1.0, std::abs(lam));
        for (const auto& row : t.rows) {
            const double tau = std::stod(row[0]);
            for (std::size_t j = 0; j < sigma_s_list.size(); ++j) {
                const double pe_yx = std::stod(row[1 + 2 * j]);
                const double pe_xy = std::stod(row[2 + 2 * j]);
                if (std::abs(tau - lam) <= tie_tol) {
                    if (std::abs(pe_yx - pe_xy) > 2.0 * o.tol)
                        throw VerifyFailure("directions disagree at tau=lam");
                } else if (tau < lam ? !(pe_yx < pe_xy) : !(pe_yx > pe_xy)) {
                    throw VerifyFailure("fusion at the better sensor should win at tau=" +
                                        row[0]);
                }
            }
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// compare-patterns

int cmd_compare_patterns(const std::vector<std::string>& files, const std::string& family_spec,
                         double family_sigma, const std::string& sweep_text,
                         const CommonOpts& o) {
    const OptConfig cfg = make_cfg(o);
    Table t;

    if (!family_spec.empty()) {
        if (!files.empty())
            throw ValidationError("give either network files or --family, not both");
        const auto colon = family_spec.find(':');
        if (colon == std::string::npos)
            throw ValidationError("--family expects n:max_edges");
        int n = 0, max_edges = 0;
        try {
            n = std::stoi(family_spec.substr(0, colon));
            max_edges = std::stoi(family_spec.substr(colon + 1));
        } catch (const std::exception&) {
            throw ValidationError("--family expects n:max_edges");
        }
        const PatternFamily family = enumerate_patterns(n, max_edges);
        const WgnModel m = n_sensor_wgn(std::vector<double>(n, family_sigma));
        const PatternChoice choice = optimal_pattern(family, m, cfg);
        std::ostringstream edges;
        for (std::size_t i = 0; i < choice.dag.edges().size(); ++i)
            edges << (i ? ";" : "") << choice.dag.edges()[i].first << ">"
                  << choice.dag.edges()[i].second;
        std::cout << "patterns " << family.members.size() << "\n"
                  << "best_edges " << edges.str() << "\n"
                  << "gfc " << choice.gfc << "\n"
                  << "chernoff " << fmt12(choice.value) << "\n";
        t.header = {"n", "max_edges", "patterns", "best_edges", "gfc", "chernoff"};
        t.rows.push_back({std::to_string(n), std::to_string(max_edges),
                          std::to_string(family.members.size()), edges.str(),
                          std::to_string(choice.gfc), fmt12(choice.value)});
        if (!o.out.empty() || !o.dat.empty()) emit_table(t, o);
        return 0;
    }

    if (files.size() != 2)
        throw ValidationError("compare-patterns needs two network files or --family");
    const SweepSpec sweep = parse_sweep(sweep_text, "sigma_1");
    const NetworkFile a = load_network_file(files[0]);
    const NetworkFile b = load_network_file(files[1]);
    const auto prior = [&](const NetworkFile& nf) { return nf.prior1 ? *nf.prior1 : 0.5; };
    const auto cost = [&](const NetworkFile& nf) {
        return nf.cost ? *nf.cost : CostMatrix::zero_one();
    };

    t.header = {"sigma_1", "risk_a", "risk_b", "converged_a", "converged_b"};
    t.rows.resize(static_cast<std::size_t>(sweep.steps));
    parallel_for(sweep.steps, o.jobs, [&](int i) {
        const double s1 = sweep.value(i);
        const OptResult ra = pbpo_bayes(
            a.dag, n_sensor_wgn(std::vector<double>(static_cast<std::size_t>(a.dag.n()), s1)),
            cost(a), prior(a), cfg);
        const OptResult rb = pbpo_bayes(
            b.dag, n_sensor_wgn(std::vector<double>(static_cast<std::size_t>(b.dag.n()), s1)),
            cost(b), prior(b), cfg);
        t.rows[static_cast<std::size_t>(i)] = {fmt12(s1), fmt12(ra.objective_value),
                                               fmt12(rb.objective_value),
                                               ra.converged ? "1" : "0",
                                               rb.converged ? "1" : "0"};
        std::cerr << "compare-patterns: sigma_1=" << fmt12(s1) << " done\n";
    });
    emit_table(t, o);

    if (o.strict)
        for (const auto& row : t.rows)
            if (row[3] == "0" || row[4] == "0") throw NonConvergence("compare-patterns point");
    if (o.verify)
        for (const auto& row : t.rows)
            if (std::stod(row[1]) > std::stod(row[2]) + 2.0 * o.tol)
                throw VerifyFailure("first network should be at least as good at sigma_1=" +
                                    row[0]);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"threshold-rule optimization for distributed detection networks"};
    app.require_subcommand(1);

    // threshold-count
    std::string tc_file;
    CLI::App* tc = app.add_subcommand("threshold-count",
                                      "total threshold-table size of a network file");
    tc->add_option("file", tc_file, "network file")->required();

    // optimize
    std::string opt_file, opt_objective;
    std::optional<double> opt_prior, opt_alpha;
    std::vector<double> opt_cost;
    bool opt_interactive = false;
    CommonOpts opt_common;
    CLI::App* op = app.add_subcommand("optimize", "optimize one network/model file");
    op->add_option("file", opt_file, "network file")->required();
    op->add_option("--objective", opt_objective, "bayes|pe|np|kl")->required();
    op->add_option("--prior", opt_prior, "P(H1), overrides the file");
    op->add_option("--cost", opt_cost, "c00,c01,c10,c11, overrides the file")->delimiter(',');
    op->add_option("--alpha", opt_alpha, "false-alarm ceiling (np)");
    op->add_flag("--interactive", opt_interactive,
                 "np: use the two-exchange interactive scheme");
    add_common(op, opt_common);

    // np-curve
    double npc_alpha = 0.2, npc_sigma_y = 1.0;
    std::string npc_sweep = "sigma_x:0.5:2:16";
    CommonOpts npc_common;
    CLI::App* npc = app.add_subcommand(
        "np-curve", "detection probability vs sigma_x at fixed false-alarm rate");
    npc->add_option("--alpha", npc_alpha, "false-alarm ceiling");
    npc->add_option("--sigma-y", npc_sigma_y, "peripheral sensor noise");
    npc->add_option("--sweep", npc_sweep, "sigma_x:lo:hi:steps");
    add_common(npc, npc_common);

    // kl-curve
    double klc_sigma_y = 1.0;
    std::string klc_sweep = "sigma_x:0.5:2:16";
    CommonOpts klc_common;
    CLI::App* klc = app.add_subcommand("kl-curve",
                                       "error exponents of both fusion directions vs sigma_x");
    klc->add_option("--sigma-y", klc_sigma_y, "y sensor noise");
    klc->add_option("--sweep", klc_sweep, "sigma_x:lo:hi:steps");
    add_common(klc, klc_common);

    // compare-direction
    double cd_mu = 1.0, cd_lam = 1.0, cd_prior = 0.5;
    std::vector<double> cd_sigma_s{0.0, 1.0};
    std::string cd_sweep = "tau:0.25:4:4";
    CommonOpts cd_common;
    CLI::App* cd = app.add_subcommand(
        "compare-direction", "correlated model: fusion direction vs noise ratio");
    cd->add_option("--mu", cd_mu, "signal mean under H1");
    cd->add_option("--sigma-s", cd_sigma_s, "signal std deviations (list)")->delimiter(',');
    cd->add_option("--lam", cd_lam, "y-noise variance");
    cd->add_option("--prior", cd_prior, "P(H1)");
    cd->add_option("--sweep", cd_sweep, "tau:lo:hi:steps (x-noise variance)");
    add_common(cd, cd_common);

    // compare-patterns
    std::vector<std::string> cp_files;
    std::string cp_family, cp_sweep = "sigma_1:0.5:2:3";
    double cp_sigma = 1.0;
    CommonOpts cp_common;
    CLI::App* cp = app.add_subcommand(
        "compare-patterns", "risk of two networks over sigma_1, or best pattern in a family");
    cp->add_option("files", cp_files, "two network files")->expected(0, 2);
    cp->add_option("--family", cp_family, "n:max_edges pattern family search");
    cp->add_option("--family-sigma", cp_sigma, "identical sensor noise for the family");
    cp->add_option("--sweep", cp_sweep, "sigma_1:lo:hi:steps");
    add_common(cp, cp_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (tc->parsed()) return cmd_threshold_count(tc_file);
        if (op->parsed())
            return cmd_optimize(opt_file, opt_objective, opt_prior, opt_cost, opt_alpha,
                                opt_interactive, opt_common);
        if (npc->parsed()) return cmd_np_curve(npc_alpha, npc_sigma_y, npc_sweep, npc_common);
        if (klc->parsed()) return cmd_kl_curve(klc_sigma_y, klc_sweep, klc_common);
        if (cd->parsed())
            return cmd_compare_direction(cd_mu, cd_sigma_s, cd_lam, cd_prior, cd_sweep,
                                         cd_common);
        if (cp->parsed())
            return cmd_compare_patterns(cp_files, cp_family, cp_sigma, cp_sweep, cp_common);
        std::cerr << "no subcommand\n";
        return kExitValidation;
    } catch (const VerifyFailure& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerifyFail;
    } catch (const NonConvergence& e) {
        std::cerr << "did not converge: " << e.what() << "\n";
        return kExitNoConverge;
    } catch (const ConvergenceError& e) {
        std::cerr << "numeric routine did not converge: " << e.what() << "\n";
        return kExitNoConverge;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const InfeasibleConstraintError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitValidation;
    } catch (const BudgetError& e) {
        std::cerr << "over budget: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
