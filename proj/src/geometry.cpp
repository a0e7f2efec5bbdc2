#include "stt/geometry.hpp"

#include "stt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stt {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi), empty_(false)
{
    if (std::isnan(lo) || std::isnan(hi))
        throw ConfigError("interval", "NaN bound");
    if (lo > hi)
        throw ConfigError("interval", "lower bound " + std::to_string(lo) +
                                          " exceeds upper bound " + std::to_string(hi));
}

double Interval::lo() const
{
    if (empty_)
        throw std::logic_error("lo() of empty interval");
    return lo_;
}

double Interval::hi() const
{
    if (empty_)
        throw std::logic_error("hi() of empty interval");
    return hi_;
}

bool Interval::contains(const Interval& other) const
{
    if (other.empty_)
        return true;
    return !empty_ && lo_ <= other.lo_ && other.hi_ <= hi_;
}

bool Interval::operator==(const Interval& other) const
{
    if (empty_ || other.empty_)
        return empty_ == other.empty_;
    return lo_ == other.lo_ && hi_ == other.hi_;
}

bool intersects(const Interval& a, const Interval& b)
{
    if (a.is_empty() || b.is_empty())
        return false;
    return std::max(a.lo(), b.lo()) <= std::min(a.hi(), b.hi());
}

Interval intersection(const Interval& a, const Interval& b)
{
    if (!intersects(a, b))
        return Interval::empty();
    return Interval(std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

Box::Box(std::vector<Interval> dims) : dims_(std::move(dims)) {}

Box::Box(std::initializer_list<std::pair<double, double>> bounds)
{
    dims_.reserve(bounds.size());
    for (const auto& [lo, hi] : bounds)
        dims_.emplace_back(lo, hi);
}

bool Box::contains_point(const std::vector<double>& x) const
{
    if (x.size() != dims_.size())
        throw ConfigError("box", "point dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!dims_[i].contains(x[i]))
            return false;
    return true;
}

bool Box::contains_point_strictly(const std::vector<double>& x) const
{
    if (x.size() != dims_.size())
        throw ConfigError("box", "point dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!dims_[i].contains_strictly(x[i]))
            return false;
    return true;
}

namespace {

void require_same_size(const Box& a, const Box& b)
{
    if (a.size() != b.size())
        throw ConfigError("box", "dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                     std::to_string(b.size()));
}

}  // namespace

bool box_contains(const Box& outer, const Box& inner)
{
    require_same_size(outer, inner);
    for (std::size_t i = 0; i < outer.size(); ++i)
        if (!outer[i].contains(inner[i]))
            return false;
    return true;
}

bool box_disjoint(const Box& a, const Box& b)
{
    require_same_size(a, b);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!intersects(a[i], b[i]))
            return true;
    return false;
}

double box_separation(const Box& a, const Box& b)
{
    require_same_size(a, b);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double gap = std::max(b[i].lo() - a[i].hi(), a[i].lo() - b[i].hi());
        best = std::max(best, gap);
    }
    return best;
}

}  // namespace stt
