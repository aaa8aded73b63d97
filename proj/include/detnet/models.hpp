#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "detnet/gauss.hpp"

namespace detnet {

// Constant signal in white Gaussian noise: sensor k observes s + z_k with
// z_k ~ N(0, sigma_k^2), s = 0 under H0 and s = 1 under H1; observations
// conditionally independent across sensors.
struct WgnModel {
    std::vector<double> sigma;  // per sensor, all > 0

    static constexpr double mu0 = 0.0;
    static constexpr double mu1 = 1.0;

    Gaussian1D h0(int k) const;  // distribution of sensor k's observation, 1-based
    Gaussian1D h1(int k) const;
};

// Validates sigmas and builds the model.
WgnModel n_sensor_wgn(const std::vector<double>& sigmas);

// Random-signal pair: x = s + z1, y = s + z2 with z1 ~ N(0, tau),
// z2 ~ N(0, lam); H0: s = 0, H1: s ~ N(mu, sigma_s2).  Under H1 the pair is
// bivariate normal with covariance [[sigma_s2+tau, sigma_s2],
// [sigma_s2, sigma_s2+lam]].  (lam names the y-noise variance; it is not a
// Lagrange multiplier or an LRT threshold.)
struct CorrelatedModel {
    double mu = 1.0;
    double sigma_s2 = 1.0;  // >= 0
    double tau = 1.0;       // > 0, x-noise variance
    double lam = 1.0;       // > 0, y-noise variance

    CorrelatedModel() = default;
    CorrelatedModel(double mu_, double sigma_s2_, double tau_, double lam_);
};

// Two-stage rule for the correlated model: the peripheral sensor decides
// v = 1 outside [t_minus, t_plus]; the fusion sensor decides w = 1 outside
// [Tv_minus, Tv_plus] for the received v.
struct CorrelatedThresholds {
    double t_minus, t_plus;
    double T0_minus, T0_plus;
    double T1_minus, T1_plus;
};

void validate(const CorrelatedThresholds& th);  // ordering t- < t+ etc.

// Centralized two-sensor benchmark: both observations available to one
// detector, false-alarm ceiling alpha.  Solves the alpha integral for the
// statistic threshold t by bisection and evaluates P_d by quadrature.
struct CentralizedNp {
    double pd;
    double t;  // threshold on x/sx^2 + y/sy^2
};
CentralizedNp centralized_np(double sx, double sy, double alpha,
                             const QuadratureSpec& spec = {});

// Conditional law of x given y (and of y given x) under the correlated H1.
// The sigma_s2 = 0 limit degenerates to the independent model (mean mu).
std::pair<double, double> cond_mean_var_x_given_y(const CorrelatedModel& m, double y);
std::pair<double, double> cond_mean_var_y_given_x(const CorrelatedModel& m, double x);

// Error probability pi0*P0(w=1) + pi1*P1(w=0) for the two-stage rule where
// the final decision is made at the x-sensor using y's bit.  H0 factorizes;
// H1 rectangle probabilities are reduced to 1-D quadrature of conditional
// interval probabilities against the x marginal.
double correlated_error_prob(const CorrelatedModel& m, const CorrelatedThresholds& th,
                             double prior1, const QuadratureSpec& spec = {});

// Log-ratio functions whose sub-level sets are the decision intervals:
// f(y) for the peripheral stage, g_v(x) for the final stage.  Exposed for
// convexity checks in tests.
struct RegionMembership {
    std::function<double(double)> f;
    std::function<double(double)> g0;
    std::function<double(double)> g1;
};
RegionMembership region_membership_functions(const CorrelatedModel& m,
                                             const CorrelatedThresholds& th);

}  // namespace detnet
