#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

namespace stt {

/// Closed interval [lo, hi] on the real line, or the explicit empty interval.
class Interval {
public:
    /// Throws ConfigError when lo > hi or either end is NaN.
    Interval(double lo, double hi);

    static Interval empty() { return Interval(); }

    bool is_empty() const { return empty_; }
    double lo() const;
    double hi() const;
    double width() const { return empty_ ? 0.0 : hi_ - lo_; }
    double center() const { return 0.5 * (lo() + hi()); }

    bool contains(double x) const { return !empty_ && lo_ <= x && x <= hi_; }
    bool contains_strictly(double x) const { return !empty_ && lo_ < x && x < hi_; }
    bool contains(const Interval& other) const;

    bool operator==(const Interval& other) const;

private:
    Interval() = default;

    double lo_ = 0.0;
    double hi_ = 0.0;
    bool empty_ = true;
};

/// Closed-interval overlap test. Shared endpoints count as overlapping.
bool intersects(const Interval& a, const Interval& b);

/// Set intersection; the empty interval when the operands do not overlap.
Interval intersection(const Interval& a, const Interval& b);

/// Axis-aligned hyperrectangle, one interval per dimension.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> dims);
    Box(std::initializer_list<std::pair<double, double>> bounds);

    std::size_t size() const { return dims_.size(); }
    const Interval& operator[](std::size_t i) const { return dims_[i]; }
    const std::vector<Interval>& dims() const { return dims_; }

    bool contains_point(const std::vector<double>& x) const;
    bool contains_point_strictly(const std::vector<double>& x) const;

private:
    std::vector<Interval> dims_;
};

/// inner ⊆ outer, dimension by dimension. Throws ConfigError on size mismatch.
bool box_contains(const Box& outer, const Box& inner);

/// True iff some dimension has non-overlapping projections.
/// Throws ConfigError on size mismatch.
bool box_disjoint(const Box& a, const Box& b);

/// Signed separation between two boxes: the largest per-dimension gap.
/// Positive means disjoint, zero means touching, negative means overlapping.
double box_separation(const Box& a, const Box& b);

}  // namespace stt
