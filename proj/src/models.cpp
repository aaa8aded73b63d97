#include "detnet/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "detnet/errors.hpp"

namespace detnet {

namespace {

void check_sensor_index(int k, std::size_t n) {
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw ValidationError("sensor index " + std::to_string(k) + " out of range 1.." +
                              std::to_string(n));
}

// P(lo <= Z <= hi) for Z ~ g; infinite endpoints allowed.
double interval_prob(double lo, double hi, const Gaussian1D& g) {
    const double sd = g.sd();
    return q_function((lo - g.mean) / sd) - q_function((hi - g.mean) / sd);
}

double log_density_ratio(double z, const Gaussian1D& g0, const Gaussian1D& g1) {
    const double d0 = z - g0.mean, d1 = z - g1.mean;
    return std::log(g0.sd() / g1.sd()) + d0 * d0 / (2.0 * g0.variance) -
           d1 * d1 / (2.0 * g1.variance);
}

Gaussian1D x_marginal(const CorrelatedModel& m, int h) {
    return h == 0 ? Gaussian1D{0.0, m.tau} : Gaussian1D{m.mu, m.sigma_s2 + m.tau};
}

Gaussian1D y_marginal(const CorrelatedModel& m, int h) {
    return h == 0 ? Gaussian1D{0.0, m.lam} : Gaussian1D{m.mu, m.sigma_s2 + m.lam};
}

}  // namespace

Gaussian1D WgnModel::h0(int k) const {
    check_sensor_index(k, sigma.size());
    return {mu0, sigma[k - 1] * sigma[k - 1]};
}

Gaussian1D WgnModel::h1(int k) const {
    check_sensor_index(k, sigma.size());
    return {mu1, sigma[k - 1] * sigma[k - 1]};
}

WgnModel n_sensor_wgn(const std::vector<double>& sigmas) {
    if (sigmas.empty()) throw ValidationError("need at least one sensor noise level");
    for (std::size_t i = 0; i < sigmas.size(); ++i)
        if (!(sigmas[i] > 0.0) || !std::isfinite(sigmas[i]))
            throw ValidationError("sensor " + std::to_string(i + 1) +
                                  ": noise level must be finite and > 0");
    WgnModel m;
    m.sigma = sigmas;
    return m;
}

CorrelatedModel::CorrelatedModel(double mu_, double sigma_s2_, double tau_, double lam_)
    : mu(mu_), sigma_s2(sigma_s2_), tau(tau_), lam(lam_) {
    if (!std::isfinite(mu)) throw ValidationError("signal mean must be finite");
    if (!(sigma_s2 >= 0.0) || !std::isfinite(sigma_s2))
        throw ValidationError("signal variance must be finite and >= 0");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw ValidationError("x-noise variance must be finite and > 0");
    if (!(lam > 0.0) || !std::isfinite(lam))
        throw ValidationError("y-noise variance must be finite and > 0");
}

void validate(const CorrelatedThresholds& th) {
    const double v[6] = {th.t_minus, th.t_plus, th.T0_minus, th.T0_plus, th.T1_minus, th.T1_plus};
    for (double x : v)
        if (std::isnan(x)) throw ValidationError("threshold is NaN");
    if (!(th.t_minus < th.t_plus)) throw ValidationError("need t- < t+");
    if (!(th.T0_minus < th.T0_plus)) throw ValidationError("need T0- < T0+");
    if (!(th.T1_minus < th.T1_plus)) throw ValidationError("need T1- < T1+");
}

CentralizedNp centralized_np(double sx, double sy, double alpha, const QuadratureSpec& spec) {
    if (!(sx > 0.0) || !(sy > 0.0)) throw ValidationError("noise levels must be > 0");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
    const double vx = sx * sx;

    // P(x/sx^2 + y/sy^2 > t | H0), marginalizing y | x analytically.
    const auto pf_of = [&](double t) {
        const Gaussian1D g0{0.0, vx};
        return integrate([&](double x) { return q_function(sy * t - sy * x / vx) *
                                                 normal_pdf(x, g0); },
                         -std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity(), spec);
    };

    // pf_of is strictly decreasing in t; expand a bracket, then bisect.
    double lo = -1.0, hi = 1.0;
    while (pf_of(lo) < alpha) { hi = lo; lo *= 2.0; }
    while (pf_of(hi) > alpha) { lo = hi; hi *= 2.0; }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (pf_of(mid) > alpha ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);

    const Gaussian1D g1{1.0, vx};
    const double pd =
        integrate([&](double x) { return q_function(sy * t - sy * x / vx - 1.0 / sy) *
                                         normal_pdf(x, g1); },
                  -std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), spec);
    return {pd, t};
}

std::pair<double, double> cond_mean_var_x_given_y(const CorrelatedModel& m, double y) {
    if (m.sigma_s2 == 0.0) return {m.mu, m.tau};
    const double r = m.lam / m.sigma_s2;
    return {(y + m.mu * r) / (1.0 + r), m.tau + m.lam / (1.0 + r)};
}

std::pair<double, double> cond_mean_var_y_given_x(const CorrelatedModel& m, double x) {
    if (m.sigma_s2 == 0.0) return {m.mu, m.lam};
    const double r = m.tau / m.sigma_s2;
    return {(x + m.mu * r) / (1.0 + r), m.lam + m.tau / (1.0 + r)};
}

double correlated_error_prob(const CorrelatedModel& m, const CorrelatedThresholds& th,
                             double prior1, const QuadratureSpec& spec) {
    validate(th);
    if (!(prior1 > 0.0) || !(prior1 < 1.0))
        throw ValidationError("prior must lie strictly in (0,1)");

    // H0: x and y are independent, so product-region probabilities factorize.
    const double p0y_in = interval_prob(th.t_minus, th.t_plus, y_marginal(m, 0));
    const double p0x_T0 = interval_prob(th.T0_minus, th.T0_plus, x_marginal(m, 0));
    const double p0x_T1 = interval_prob(th.T1_minus, th.T1_plus, x_marginal(m, 0));
    const double p0_w1 = (1.0 - p0x_T0) * p0y_in + (1.0 - p0x_T1) * (1.0 - p0y_in);

    // H1 rectangle P1(x in [Tv], y in [t-,t+]) via conditioning on x.
    const Gaussian1D x1 = x_marginal(m, 1);
    const auto rect = [&](double tv_lo, double tv_hi) {
        // The box can be far wider than the x-density's support, and an
        // adaptive rule whose initial samples all miss the bump accepts ~0.
        // Clip to the +/-12 sd window (truncated mass < 4e-33) and integrate
        // in chunks no wider than 2 sd so the bump is always sampled.
        const double s1 = x1.sd();
        const double a = std::max(tv_lo, x1.mean - 12.0 * s1);
        const double b = std::min(tv_hi, x1.mean + 12.0 * s1);
        if (!(a < b)) return 0.0;
        const auto f = [&](double x) {
            const auto [mu2, v2] = cond_mean_var_y_given_x(m, x);
            const double s2 = std::sqrt(v2);
            return normal_pdf(x, x1) * (q_function((th.t_minus - mu2) / s2) -
                                        q_function((th.t_plus - mu2) / s2));
        };
        const int chunks = std::max(1, static_cast<int>(std::ceil((b - a) / (2.0 * s1))));
        double total = 0.0;
        for (int i = 0; i < chunks; ++i) {
            total += integrate(f, a + (b - a) * i / chunks, a + (b - a) * (i + 1) / chunks,
                               spec);
        }
        return total;
    };
    const double p1x_T1 = interval_prob(th.T1_minus, th.T1_plus, x1);
    const double p1_w0 = rect(th.T0_minus, th.T0_plus) + p1x_T1 - rect(th.T1_minus, th.T1_plus);

    return (1.0 - prior1) * p0_w1 + prior1 * p1_w0;
}

RegionMembership region_membership_functions(const CorrelatedModel& m,
                                             const CorrelatedThresholds& th) {
    validate(th);
    const Gaussian1D x0 = x_marginal(m, 0), x1 = x_marginal(m, 1);
    const Gaussian1D y0 = y_marginal(m, 0), y1 = y_marginal(m, 1);
    const double p0x_T0 = interval_prob(th.T0_minus, th.T0_plus, x0);
    const double p0x_T1 = interval_prob(th.T1_minus, th.T1_plus, x0);
    const double p0y_in = interval_prob(th.t_minus, th.t_plus, y0);

    RegionMembership rm;
    // Peripheral stage: indicator difference of the two final-stage accept
    // regions, averaged over p1(x|y), against its counterpart under H0.
    rm.f = [m, th, y0, y1, p0x_T0, p0x_T1](double y) {
        const auto [mu1, v1] = cond_mean_var_x_given_y(m, y);
        const Gaussian1D c{mu1, v1};
        const double num = interval_prob(th.T0_minus, th.T0_plus, c) -
                           interval_prob(th.T1_minus, th.T1_plus, c);
        return log_density_ratio(y, y0, y1) + std::log(num / (p0x_T0 - p0x_T1));
    };
    const auto make_g = [m, th, x0, x1, p0y_in](int v) {
        return [m, th, x0, x1, p0y_in, v](double x) {
            const auto [mu2, v2] = cond_mean_var_y_given_x(m, x);
            const Gaussian1D c{mu2, v2};
            const double in = interval_prob(th.t_minus, th.t_plus, c);
            const double num = v == 0 ? in : 1.0 - in;
            const double den = v == 0 ? p0y_in : 1.0 - p0y_in;
            return log_density_ratio(x, x0, x1) + std::log(num / den);
        };
    };
    rm.g0 = make_g(0);
    rm.g1 = make_g(1);
    return rm;
}

}  // namespace detnet
