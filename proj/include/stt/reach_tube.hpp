#pragma once

#include "stt/scenario.hpp"

#include <cstddef>

namespace stt {

/// Nominal reachability margin: a tanh profile from `start` at t = 0 to `end`
/// at t = t_c, constant afterwards.
///
///   rho(t) = start + (end - start) tanh(t / (t_c - t)),  t < t_c
///
/// which is the exact solution of
///   rho'(t) = t_c (end - start) / (t_c - t)^2 sech^2(t / (t_c - t)).
double reach_value(double start, double end, double t_c, double t);
double reach_rate(double start, double end, double t_c, double t);

/// Per-dimension margin from the lower corner of Ŝ to the lower corner of T̂.
class ReachMargin {
public:
    ReachMargin() = default;
    ReachMargin(Vec start, Vec end, double t_c);

    std::size_t dims() const { return start_.size(); }
    double t_c() const { return t_c_; }
    double start(std::size_t i) const { return start_[i]; }
    double end(std::size_t i) const { return end_[i]; }

    double value(std::size_t i, double t) const { return reach_value(start_[i], end_[i], t_c_, t); }
    double rate(std::size_t i, double t) const { return reach_rate(start_[i], end_[i], t_c_, t); }

    /// First time in [0, t_c] at which the margin in dimension i reaches
    /// `level`, as a fraction of t_c: 0 when the level is at or behind the
    /// start, 1 when it is never reached before t_c.
    double crossing_fraction(std::size_t i, double level) const;

private:
    Vec start_;
    Vec end_;
    double t_c_ = 0.0;
};

/// The nominal tube: Ŝ, T̂ and the band [rho_i, rho_i + w_i] with
/// w_i = 2 min(d_S,i, d_T,i) using the effective (possibly shrunk) extents.
struct Corridor {
    CenteredBox initial;
    CenteredBox target;
    Vec band_width;
    ReachMargin margin;

    std::size_t dims() const { return band_width.size(); }
    double t_c() const { return margin.t_c(); }

    /// Nominal cross-section [rho_i(t), rho_i(t) + w_i].
    Interval band(std::size_t i, double t) const;
};

Corridor make_corridor(const RasTask& task);

}  // namespace stt
