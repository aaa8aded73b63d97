#include "detnet/gauss.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "detnet/errors.hpp"

namespace detnet {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

bool nearly_equal_rel(double a, double b, double rel) {
    return std::fabs(a - b) <= rel * std::fmax(std::fabs(a), std::fabs(b));
}

}  // namespace

Gaussian1D::Gaussian1D(double mean_, double variance_) : mean(mean_), variance(variance_) {
    if (!std::isfinite(mean)) throw ValidationError("Gaussian1D: mean must be finite");
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw ValidationError("Gaussian1D: variance must be positive and finite, got " +
                              std::to_string(variance_));
}

double Gaussian1D::sd() const { return std::sqrt(variance); }

double q_function(double x) {
    if (std::isnan(x)) throw ValidationError("q_function: NaN argument");
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double q_inverse(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw ValidationError("q_inverse: argument must lie strictly in (0,1)");
    // Bisection on the monotone q_function, then Newton polish.
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (q_function(mid) > p ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 3; ++i) {
        const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
        if (pdf <= 0.0) break;
        x += (q_function(x) - p) / pdf;
    }
    return x;
}

double normal_pdf(double x, const Gaussian1D& g) {
    if (std::isnan(x)) throw ValidationError("normal_pdf: NaN argument");
    if (std::isinf(x)) return 0.0;
    const double z = (x - g.mean) / g.sd();
    return kInvSqrt2Pi / g.sd() * std::exp(-0.5 * z * z);
}

double lrt_cut_point(double threshold, const Gaussian1D& h0, const Gaussian1D& h1) {
    if (std::isnan(threshold) || threshold < 0.0)
        throw ValidationError("lrt_cut_point: threshold must be in [0, +inf]");
    if (!nearly_equal_rel(h0.variance, h1.variance, 1e-12))
        throw UnsupportedShapeError(
            "lrt_cut_point: unequal variances make the likelihood ratio non-monotone; "
            "no single cut point exists");
    const double dmu = h1.mean - h0.mean;
    if (std::fabs(dmu) < 1e-12)
        throw DegenerateModelError("lrt_cut_point: equal means leave the hypotheses "
                                   "indistinguishable");
    // ln(0) = -inf and ln(+inf) = +inf give the correct degenerate cut points.
    return h0.variance * std::log(threshold) / dmu + 0.5 * (h0.mean + h1.mean);
}

double kl_divergence_gauss(const Gaussian1D& p0, const Gaussian1D& p1) {
    const double dm = p0.mean - p1.mean;
    return 0.5 * std::log(p1.variance / p0.variance) +
           (p0.variance + dm * dm) / (2.0 * p1.variance) - 0.5;
}

double log_tilted_integral(const Gaussian1D& p0, const Gaussian1D& p1, double s) {
    const double a = (1.0 - s) / p0.variance + s / p1.variance;
    const double b = (1.0 - s) * p0.mean / p0.variance + s * p1.mean / p1.variance;
    const double c =
        (1.0 - s) * p0.mean * p0.mean / p0.variance + s * p1.mean * p1.mean / p1.variance;
    return -0.5 * (1.0 - s) * std::log(p0.variance) - 0.5 * s * std::log(p1.variance) -
           0.5 * std::log(a) + 0.5 * (b * b / a - c);
}

double chernoff_info(const Gaussian1D& p0, const Gaussian1D& p1) {
    // The exponent is convex in s with value 0 at both ends; golden-section
    // to 1e-8 interval width locates its interior minimum.
    const double gr = 0.6180339887498948482;
    double lo = 0.0, hi = 1.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = log_tilted_integral(p0, p1, x1), f2 = log_tilted_integral(p0, p1, x2);
    while (hi - lo > 1e-8) {
        if (f1 > f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = log_tilted_integral(p0, p1, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = log_tilted_integral(p0, p1, x1);
        }
    }
    const double c = -log_tilted_integral(p0, p1, 0.5 * (lo + hi));
    return c > 0.0 ? c : 0.0;
}

namespace {

struct AdaptiveSimpson {
    const std::function<double(double)>& f;
    int max_depth;
    bool budget_exhausted = false;

    double eval(double a, double fa, double m, double fm, double b, double fb, double whole,
                double tol, int depth) {
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::fabs(delta) <= 15.0 * tol || !std::isfinite(delta))
            return left + right + delta / 15.0;
        if (depth >= max_depth) {
            budget_exhausted = true;
            return left + right + delta / 15.0;
        }
        return eval(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
               eval(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
    }

    double run(double a, double b, double tol) {
        const double m = 0.5 * (a + b);
        const double fa = f(a), fm = f(m), fb = f(b);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return eval(a, fa, m, fm, b, fb, whole, tol, 0);
    }
};

// Substitution scale: x = a + kSubstScale * atanh(t) keeps the interesting
// range of Gaussian integrands within a modest subdivision depth.
constexpr double kSubstScale = 4.0;

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0)) throw ValidationError("integrate: abs_tol must be positive");
    if (spec.max_subdivisions < 1)
        throw ValidationError("integrate: max_subdivisions must be >= 1");
    if (std::isnan(lo) || std::isnan(hi)) throw ValidationError("integrate: NaN limit");
    if (lo == hi) return 0.0;
    if (lo > hi) return -integrate(f, hi, lo, spec);

    const bool lo_inf = std::isinf(lo), hi_inf = std::isinf(hi);
    std::function<double(double)> g;
    double a, b;
    if (!lo_inf && !hi_inf) {
        g = f;
        a = lo;
        b = hi;
    } else if (lo_inf && hi_inf) {
        g = [&f](double t) {
            if (std::fabs(t) >= 1.0) return 0.0;
            const double x = kSubstScale * std::atanh(t);
            return f(x) * kSubstScale / (1.0 - t * t);
        };
        a = -1.0;
        b = 1.0;
    } else if (hi_inf) {
        const double base = lo;
        g = [&f, base](double t) {
            if (t >= 1.0) return 0.0;
            const double x = base + kSubstScale * std::atanh(t);
            return f(x) * kSubstScale / (1.0 - t * t);
        };
        a = 0.0;
        b = 1.0;
    } else {  // lo_inf only
        const double base = hi;
        g = [&f, base](double t) {
            if (t >= 1.0) return 0.0;
            const double x = base - kSubstScale * std::atanh(t);
            return f(x) * kSubstScale / (1.0 - t * t);
        };
        a = 0.0;
        b = 1.0;
    }

    AdaptiveSimpson engine{g, spec.max_subdivisions};
    const double estimate = engine.run(a, b, spec.abs_tol);
    if (engine.budget_exhausted)
        throw ConvergenceError("integrate: subdivision budget exhausted before reaching "
                               "the requested tolerance",
                               estimate);
    return estimate;
}

}  // namespace detnet
