#include "detnet/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace detnet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

IntervalSet IntervalSet::empty() { return IntervalSet{}; }

IntervalSet IntervalSet::all() { return IntervalSet({{-kInf, kInf}}); }

IntervalSet IntervalSet::above(double cut) {
    if (cut == kInf) return empty();
    return IntervalSet({{cut, kInf}});
}

IntervalSet IntervalSet::segment(double lo, double hi) {
    if (!(lo < hi)) return empty();
    return IntervalSet({{lo, hi}});
}

void IntervalSet::normalize() {
    std::erase_if(parts_, [](const Interval& iv) { return !(iv.lo < iv.hi); });
    std::sort(parts_.begin(), parts_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const Interval& iv : parts_) {
        if (!merged.empty() && iv.lo <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
            merged.push_back(iv);
    }
    parts_ = std::move(merged);
}

IntervalSet IntervalSet::complement() const {
    std::vector<Interval> out;
    double cursor = -kInf;
    for (const Interval& iv : parts_) {
        if (cursor < iv.lo) out.push_back({cursor, iv.lo});
        cursor = iv.hi;
    }
    if (cursor < kInf) out.push_back({cursor, kInf});
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    std::vector<Interval> out = parts_;
    out.insert(out.end(), other.parts_.begin(), other.parts_.end());
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    auto a = parts_.begin();
    auto b = other.parts_.begin();
    while (a != parts_.end() && b != other.parts_.end()) {
        const double lo = std::max(a->lo, b->lo);
        const double hi = std::min(a->hi, b->hi);
        if (lo < hi) out.push_back({lo, hi});
        (a->hi < b->hi ? a : b)++;
    }
    return IntervalSet(std::move(out));
}

bool IntervalSet::contains(double x) const {
    for (const Interval& iv : parts_)
        if (x >= iv.lo && x < iv.hi) return true;
    return false;
}

bool IntervalSet::is_empty() const { return parts_.empty(); }

double IntervalSet::prob(const Gaussian1D& g) const {
    const double sd = g.sd();
    double total = 0.0;
    for (const Interval& iv : parts_)
        total += q_function((iv.lo - g.mean) / sd) - q_function((iv.hi - g.mean) / sd);
    return total;
}

bool IntervalSet::almost_equal(const IntervalSet& other, double tol) const {
    if (parts_.size() != other.parts_.size()) return false;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        const auto near = [tol](double a, double b) {
            if (std::isinf(a) || std::isinf(b)) return a == b;
            return std::fabs(a - b) <= tol;
        };
        if (!near(parts_[i].lo, other.parts_[i].lo) || !near(parts_[i].hi, other.parts_[i].hi))
            return false;
    }
    return true;
}

}  // namespace detnet
