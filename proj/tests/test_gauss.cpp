#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "detnet/errors.hpp"
#include "detnet/gauss.hpp"

using namespace detnet;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent upper-tail oracle: composite Simpson integration of the
// standard normal density over [x, x+50], fixed step.  No erfc involved.
double q_oracle(double x) {
    const double hi = x + 50.0;
    const int panels = 25000;  // even
    const double h = (hi - x) / panels;
    const auto phi = [](double t) {
        return 0.3989422804014326779 * std::exp(-0.5 * t * t);
    };
    double acc = phi(x) + phi(hi);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * phi(x + i * h);
    return acc * h / 3.0;
}

// Independent tilted-integral oracle: fixed-grid Simpson over a wide finite
// range (the integrand is a product of Gaussian powers -> rapidly decaying).
double log_tilted_oracle(const Gaussian1D& p0, const Gaussian1D& p1, double s) {
    const double lo = std::min(p0.mean, p1.mean) - 12.0 * std::max(p0.sd(), p1.sd());
    const double hi = std::max(p0.mean, p1.mean) + 12.0 * std::max(p0.sd(), p1.sd());
    const int panels = 40000;
    const double h = (hi - lo) / panels;
    const auto f = [&](double x) {
        return std::pow(normal_pdf(x, p0), 1.0 - s) * std::pow(normal_pdf(x, p1), s);
    };
    double acc = f(lo) + f(hi);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return std::log(acc * h / 3.0);
}

}  // namespace

TEST_CASE("gaussian construction validates parameters") {
    CHECK_NOTHROW(Gaussian1D(0.0, 1.0));
    CHECK_THROWS_AS(Gaussian1D(0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(Gaussian1D(0.0, -1.0), ValidationError);
    CHECK_THROWS_AS(Gaussian1D(kInf, 1.0), ValidationError);
    CHECK(Gaussian1D(2.0, 4.0).sd() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("upper tail matches the quadrature oracle and frozen references") {
    // High-precision references.
    CHECK(std::abs(q_function(1.96) - 0.024997895148220434) < 1e-16);
    CHECK(std::abs(q_function(0.5) - 0.30853753872598690) < 1e-15);
    CHECK(std::abs(q_function(-0.5) - 0.69146246127401310) < 1e-15);
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));

    for (double x : {-3.0, -1.0, -0.3, 0.0, 0.4, 1.1, 2.5})
        CHECK(q_function(x) == doctest::Approx(q_oracle(x)).epsilon(1e-10));

    // Symmetry and monotonicity.
    for (double x : {0.1, 0.9, 2.2})
        CHECK(q_function(x) + q_function(-x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q_function(1.0) < q_function(0.99));
    CHECK_THROWS_AS(q_function(std::nan("")), ValidationError);
}

TEST_CASE("inverse upper tail round-trips to full precision") {
    CHECK(std::abs(q_inverse(0.2) - 0.84162123357291420) < 1e-13);
    for (double p : {1e-10, 1e-4, 0.3, 0.5, 0.77, 1.0 - 1e-6}) {
        const double x = q_inverse(p);
        CHECK(q_function(x) == doctest::Approx(p).epsilon(1e-12));
    }
    for (double x : {-5.0, -0.2, 0.0, 1.3, 6.0})
        CHECK(q_inverse(q_function(x)) == doctest::Approx(x).epsilon(1e-10));
    CHECK_THROWS_AS(q_inverse(0.0), ValidationError);
    CHECK_THROWS_AS(q_inverse(1.0), ValidationError);
    CHECK_THROWS_AS(q_inverse(-0.1), ValidationError);
}

TEST_CASE("normal density values") {
    const Gaussian1D std_normal{0.0, 1.0};
    CHECK(std::abs(normal_pdf(0.0, std_normal) - 0.39894228040143268) < 1e-16);
    CHECK(std::abs(normal_pdf(1.0, std_normal) - 0.24197072451914335) < 1e-16);
    const Gaussian1D g{2.0, 9.0};
    CHECK(normal_pdf(2.0, g) == doctest::Approx(0.39894228040143268 / 3.0).epsilon(1e-15));
    CHECK(normal_pdf(kInf, g) == 0.0);
    CHECK(normal_pdf(-kInf, g) == 0.0);
}

TEST_CASE("likelihood-ratio cut point: closed form, degenerate thresholds, errors") {
    const Gaussian1D h0{0.0, 1.0}, h1{1.0, 1.0};
    CHECK(lrt_cut_point(1.0, h0, h1) == doctest::Approx(0.5).epsilon(1e-15));
    // p1(x)/p0(x) = exp(x - 1/2) for these hypotheses; invert explicitly.
    for (double thr : {0.25, 1.0, 3.7}) {
        const double cut = lrt_cut_point(thr, h0, h1);
        CHECK(std::exp(cut - 0.5) == doctest::Approx(thr).epsilon(1e-12));
    }
    const Gaussian1D w0{0.0, 4.0}, w1{1.0, 4.0};
    CHECK(lrt_cut_point(1.0, w0, w1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lrt_cut_point(std::exp(0.25), w0, w1) == doctest::Approx(1.5).epsilon(1e-12));

    CHECK(lrt_cut_point(0.0, h0, h1) == -kInf);
    CHECK(lrt_cut_point(kInf, h0, h1) == kInf);
    CHECK_THROWS_AS(lrt_cut_point(-1.0, h0, h1), ValidationError);
    CHECK_THROWS_AS(lrt_cut_point(1.0, Gaussian1D{0.0, 1.0}, Gaussian1D{1.0, 2.0}),
                    UnsupportedShapeError);
    CHECK_THROWS_AS(lrt_cut_point(1.0, Gaussian1D{0.3, 1.0}, Gaussian1D{0.3, 1.0}),
                    DegenerateModelError);
}

TEST_CASE("gaussian divergence closed form") {
    CHECK(std::abs(kl_divergence_gauss({0.0, 1.0}, {1.0, 1.0}) - 0.5) < 1e-15);
    CHECK(kl_divergence_gauss({3.0, 2.0}, {3.0, 2.0}) == 0.0);
    // Same-variance pair: D = (mu0-mu1)^2 / (2 v).
    CHECK(kl_divergence_gauss({0.0, 4.0}, {1.0, 4.0}) ==
          doctest::Approx(0.125).epsilon(1e-15));
    CHECK(std::abs(kl_divergence_gauss({-0.5, 0.64}, {0.75, 2.25}) - 0.618053103866818582) <
          1e-14);
    CHECK(std::abs(kl_divergence_gauss({0.75, 2.25}, {-0.5, 0.64}) - 1.84990696557762586) <
          1e-13);
}

TEST_CASE("tilted integral: endpoint identities, convexity, quadrature oracle") {
    const std::vector<std::pair<Gaussian1D, Gaussian1D>> pairs = {
        {{0.0, 1.0}, {1.0, 1.0}},
        {{0.0, 1.0}, {1.0, 4.0}},
        {{-0.5, 0.64}, {0.75, 2.25}},
        {{2.0, 0.25}, {-1.0, 3.0}},
    };
    for (const auto& [p0, p1] : pairs) {
        CHECK(std::abs(log_tilted_integral(p0, p1, 0.0)) < 1e-12);
        CHECK(std::abs(log_tilted_integral(p0, p1, 1.0)) < 1e-12);
        for (double s : {0.1, 0.37, 0.5, 0.81}) {
            const double v = log_tilted_integral(p0, p1, s);
            CHECK(v <= 1e-12);  // always <= 0 between two densities
            CHECK(v == doctest::Approx(log_tilted_oracle(p0, p1, s)).epsilon(1e-8));
            // Midpoint convexity.
            const double l = log_tilted_integral(p0, p1, s - 0.05);
            const double r = log_tilted_integral(p0, p1, s + 0.05);
            CHECK(v <= 0.5 * (l + r) + 1e-12);
        }
    }
}

TEST_CASE("chernoff information: symmetric closed form and frozen references") {
    // Equal variances: C = (mu1-mu0)^2 / (8 v), attained at s = 1/2.
    CHECK(chernoff_info({0.0, 1.0}, {1.0, 1.0}) == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(chernoff_info({0.0, 4.0}, {3.0, 4.0}) ==
          doctest::Approx(9.0 / 32.0).epsilon(1e-9));
    CHECK(std::abs(chernoff_info({0.0, 1.0}, {1.0, 4.0}) - 0.172116722932016724) < 1e-10);
    CHECK(std::abs(chernoff_info({-0.5, 0.64}, {0.75, 2.25}) - 0.243756208631521012) < 1e-10);
    // Symmetry in the argument order.
    CHECK(chernoff_info({0.0, 1.0}, {1.0, 4.0}) ==
          doctest::Approx(chernoff_info({1.0, 4.0}, {0.0, 1.0})).epsilon(1e-9));
    // Identical hypotheses carry no information (up to optimizer rounding).
    CHECK(chernoff_info({1.0, 2.0}, {1.0, 2.0}) <= 1e-12);
}

TEST_CASE("adaptive integration handles finite and infinite limits") {
    const Gaussian1D g{0.7, 2.3};
    const auto density = [&](double x) { return normal_pdf(x, g); };
    CHECK(integrate(density, -kInf, kInf) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(integrate(density, g.mean, kInf) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(integrate(density, -kInf, g.mean) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(integrate(density, 0.0, 0.0) == 0.0);
    // Finite interval against the tail difference.
    const double got = integrate(density, -1.0, 2.0);
    const double want = q_function((-1.0 - g.mean) / g.sd()) - q_function((2.0 - g.mean) / g.sd());
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
    // Orientation flip.
    CHECK(integrate(density, 2.0, -1.0) == doctest::Approx(-want).epsilon(1e-9));

    // Polynomial sanity.
    CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0) ==
          doctest::Approx(9.0).epsilon(1e-10));

    CHECK_THROWS_AS(integrate(density, 0.0, std::nan("")), ValidationError);

    // Exhausting the subdivision budget raises, carrying the best estimate.
    QuadratureSpec tight;
    tight.abs_tol = 1e-15;
    tight.max_subdivisions = 2;
    try {
        integrate([](double x) { return std::abs(std::sin(40.0 * x)); }, 0.0, 3.0, tight);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.best_estimate));
        CHECK(e.best_estimate > 0.0);
    }
}
