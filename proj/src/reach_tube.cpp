#include "stt/reach_tube.hpp"

#include <algorithm>
#include <cmath>

namespace stt {

namespace {

// Below this remaining time the t >= t_c branch is used.
constexpr double kTerminalGuard = 1e-9;

// sech^2(x) without overflow for large |x|.
double sech2(double x)
{
    const double q = std::exp(-2.0 * std::abs(x));
    const double d = 1.0 + q;
    return 4.0 * q / (d * d);
}

}  // namespace

double reach_value(double start, double end, double t_c, double t)
{
    if (t <= 0.0)
        return start;
    if (t_c - t < kTerminalGuard * t_c)
        return end;
    return start + (end - start) * std::tanh(t / (t_c - t));
}

double reach_rate(double start, double end, double t_c, double t)
{
    if (t < 0.0 || t_c - t < kTerminalGuard * t_c)
        return 0.0;
    const double rem = t_c - t;
    return t_c * (end - start) / (rem * rem) * sech2(t / rem);
}

ReachMargin::ReachMargin(Vec start, Vec end, double t_c)
    : start_(std::move(start)), end_(std::move(end)), t_c_(t_c)
{
}

double ReachMargin::crossing_fraction(std::size_t i, double level) const
{
    const double span = end_[i] - start_[i];
    if (span == 0.0)
        return level > start_[i] ? 1.0 : 0.0;
    const double ratio = (level - start_[i]) / span;
    if (ratio <= 0.0)
        return 0.0;
    if (ratio >= 1.0)
        return 1.0;
    const double a = std::atanh(ratio);
    return a / (1.0 + a);
}

Interval Corridor::band(std::size_t i, double t) const
{
    const double lo = margin.value(i, t);
    return Interval(lo, lo + band_width[i]);
}

Corridor make_corridor(const RasTask& task)
{
    Corridor c;
    c.initial = build_initial_box(task);
    c.target = build_target_box(task);
    Vec start, end;
    for (std::size_t i = 0; i < task.dims(); ++i) {
        c.band_width.push_back(2.0 * std::min(c.initial.half_extent[i], c.target.half_extent[i]));
        start.push_back(c.initial.box[i].lo());
        end.push_back(c.target.box[i].lo());
    }
    c.margin = ReachMargin(std::move(start), std::move(end), task.t_c);
    return c;
}

}  // namespace stt
