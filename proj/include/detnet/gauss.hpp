#pragma once

#include <functional>

namespace detnet {

// One-dimensional Gaussian N(mean, variance), variance > 0.
struct Gaussian1D {
    double mean = 0.0;
    double variance = 1.0;

    Gaussian1D() = default;
    Gaussian1D(double mean_, double variance_);  // throws ValidationError if variance <= 0

    double sd() const;
};

struct QuadratureSpec {
    double abs_tol = 1e-9;
    int max_subdivisions = 60;  // max recursion depth of the adaptive splitter
};

// Upper tail of the standard normal: Q(x) = P(N(0,1) > x).
double q_function(double x);

// Inverse of q_function on (0,1); Newton-polished to full double precision.
double q_inverse(double p);

// Density of g at x.
double normal_pdf(double x, const Gaussian1D& g);

// Cut point x* with p1(x*)/p0(x*) = threshold for equal-variance Gaussians:
// x* = sigma^2 ln(threshold)/(mu1-mu0) + (mu0+mu1)/2.
// threshold = 0 and +inf map to -inf/+inf cut points (for mu1 > mu0).
// Unequal variances: the likelihood ratio is not monotone -> UnsupportedShapeError.
// Equal means: hypotheses indistinguishable -> DegenerateModelError.
double lrt_cut_point(double threshold, const Gaussian1D& h0, const Gaussian1D& h1);

// D(p0 || p1) in nats, closed form.
double kl_divergence_gauss(const Gaussian1D& p0, const Gaussian1D& p1);

// log \int p0(x)^{1-s} p1(x)^s dx, exact (the integrand is an unnormalized
// Gaussian).  Convex in s; 0 at s = 0 and s = 1.
double log_tilted_integral(const Gaussian1D& p0, const Gaussian1D& p1, double s);

// Chernoff information -min_{s in [0,1]} log \int p0^{1-s} p1^s, golden-section
// to 1e-8 interval width over the (convex) exponent.
double chernoff_info(const Gaussian1D& p0, const Gaussian1D& p1);

// Adaptive integration of f over [lo, hi]; either limit may be infinite
// (handled by a tanh-type change of variables).  Throws ConvergenceError
// carrying the best estimate when the subdivision budget is exhausted.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec = {});

}  // namespace detnet
