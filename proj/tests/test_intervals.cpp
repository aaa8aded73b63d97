#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "detnet/gauss.hpp"
#include "detnet/intervals.hpp"

using namespace detnet;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// A few structurally different sets used across the property checks.
std::vector<IntervalSet> samples() {
    return {
        IntervalSet::empty(),
        IntervalSet::all(),
        IntervalSet::above(0.3),
        IntervalSet::segment(-1.0, 2.0),
        IntervalSet::segment(-3.0, -1.5).unite(IntervalSet::segment(0.0, 0.25)),
        IntervalSet::above(1.0).complement(),
    };
}
}  // namespace

TEST_CASE("constructors normalize and merge") {
    CHECK(IntervalSet::empty().is_empty());
    CHECK(IntervalSet::segment(2.0, 2.0).is_empty());
    CHECK(IntervalSet::segment(3.0, 1.0).is_empty());
    CHECK_FALSE(IntervalSet::all().is_empty());
    CHECK(IntervalSet::all().parts().size() == 1);
    CHECK(IntervalSet::above(kInf).is_empty());

    // Adjacent and overlapping pieces merge into one.
    const auto merged = IntervalSet::segment(0.0, 1.0).unite(IntervalSet::segment(1.0, 2.0));
    CHECK(merged.parts().size() == 1);
    CHECK(merged.parts()[0].lo == 0.0);
    CHECK(merged.parts()[0].hi == 2.0);
    const auto overlap = IntervalSet::segment(0.0, 1.5).unite(IntervalSet::segment(1.0, 2.0));
    CHECK(overlap.parts().size() == 1);

    // Disjoint pieces stay separate and sorted.
    const auto two = IntervalSet::segment(5.0, 6.0).unite(IntervalSet::segment(-2.0, 0.0));
    REQUIRE(two.parts().size() == 2);
    CHECK(two.parts()[0].lo == -2.0);
    CHECK(two.parts()[1].lo == 5.0);
}

TEST_CASE("membership respects half-open endpoints") {
    const auto s = IntervalSet::segment(0.0, 1.0);
    CHECK(s.contains(0.0));
    CHECK(s.contains(0.999));
    CHECK_FALSE(s.contains(1.0));
    CHECK_FALSE(s.contains(-1e-9));
    CHECK(IntervalSet::above(2.0).contains(2.0));
    CHECK_FALSE(IntervalSet::above(2.0).contains(1.999999));
    CHECK(IntervalSet::all().contains(-1e100));
    CHECK_FALSE(IntervalSet::empty().contains(0.0));
}

TEST_CASE("set algebra: involution, De Morgan, and point-wise agreement") {
    const std::vector<double> probes = {-4.0, -3.0, -1.5, -1.0, -0.5, 0.0,  0.1,
                                        0.25, 0.3,  0.7,  1.0,  1.5,  2.0,  5.5};
    for (const auto& a : samples()) {
        const auto cc = a.complement().complement();
        for (double x : probes) CHECK(cc.contains(x) == a.contains(x));
        for (const auto& b : samples()) {
            const auto u = a.unite(b);
            const auto i = a.intersect(b);
            const auto dm = a.complement().intersect(b.complement()).complement();
            for (double x : probes) {
                CHECK(u.contains(x) == (a.contains(x) || b.contains(x)));
                CHECK(i.contains(x) == (a.contains(x) && b.contains(x)));
                CHECK(dm.contains(x) == u.contains(x));
            }
        }
    }
}

TEST_CASE("probability under a gaussian law") {
    const Gaussian1D g{0.5, 2.0};
    CHECK(IntervalSet::all().prob(g) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(IntervalSet::empty().prob(g) == 0.0);
    const auto seg = IntervalSet::segment(-1.0, 1.0);
    const double sd = g.sd();
    const double want = q_function((-1.0 - g.mean) / sd) - q_function((1.0 - g.mean) / sd);
    CHECK(seg.prob(g) == doctest::Approx(want).epsilon(1e-14));
    for (const auto& a : samples())
        CHECK(a.prob(g) + a.complement().prob(g) == doctest::Approx(1.0).epsilon(1e-12));
    // Additivity over a disjoint union.
    const auto left = IntervalSet::segment(-2.0, 0.0), right = IntervalSet::segment(3.0, 4.0);
    CHECK(left.unite(right).prob(g) ==
          doctest::Approx(left.prob(g) + right.prob(g)).epsilon(1e-14));
}

TEST_CASE("approximate equality by endpoints") {
    const auto a = IntervalSet::segment(0.0, 1.0);
    CHECK(a.almost_equal(IntervalSet::segment(1e-10, 1.0 - 1e-10), 1e-9));
    CHECK_FALSE(a.almost_equal(IntervalSet::segment(0.01, 1.0), 1e-9));
    CHECK_FALSE(a.almost_equal(IntervalSet::empty(), 1e-9));
    CHECK(IntervalSet::all().almost_equal(IntervalSet::all(), 0.0));
    CHECK_FALSE(a.almost_equal(a.unite(IntervalSet::segment(5.0, 6.0)), 1e-9));
}
