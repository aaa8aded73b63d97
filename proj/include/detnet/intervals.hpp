#pragma once

#include <vector>

#include "detnet/gauss.hpp"

namespace detnet {

// Finite union of disjoint half-open intervals [lo, hi) on the extended real
// line, kept sorted and merged.  Used for decision regions that are not half
// lines (the interactive scheme's first-stage region).
class IntervalSet {
public:
    struct Interval {
        double lo, hi;
    };

    IntervalSet() = default;  // empty set

    static IntervalSet empty();
    static IntervalSet all();
    static IntervalSet above(double cut);              // [cut, +inf)
    static IntervalSet segment(double lo, double hi);  // [lo, hi), empty if lo >= hi

    IntervalSet complement() const;
    IntervalSet unite(const IntervalSet& other) const;
    IntervalSet intersect(const IntervalSet& other) const;

    bool contains(double x) const;
    bool is_empty() const;
    const std::vector<Interval>& parts() const { return parts_; }

    // P(X in set) for X ~ g, via Q-function differences.
    double prob(const Gaussian1D& g) const;

    // Max over points of |indicator difference| support measure is not needed;
    // equality testing is by endpoint comparison within tol.
    bool almost_equal(const IntervalSet& other, double tol) const;

private:
    explicit IntervalSet(std::vector<Interval> parts);
    void normalize();
    std::vector<Interval> parts_;  // sorted, disjoint, non-empty
};

}  // namespace detnet
