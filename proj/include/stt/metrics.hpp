#pragma once

#include "stt/plant.hpp"
#include "stt/tube.hpp"

namespace stt {

/// Aggregate input magnitude over [0, t_c] (or up to the failure time).
struct EffortReport {
    double energy = 0.0;  // ∫ |u|^2 dt
    double peak = 0.0;    // max |u|
    double l1 = 0.0;      // ∫ |u| dt
};

/// Trapezoidal integrals over the recorded rows with t <= horizon. Throws
/// std::invalid_argument on an empty trace.
EffortReport control_effort(const SimTrace& trace, double horizon);

/// Same quantities for explicit samples of (t, u).
EffortReport control_effort(const Vec& t, const std::vector<Vec>& u);

/// Ratio a / b, or +inf when b is zero and a is not (1 when both are zero).
double effort_ratio(double a, double b);

/// Steepness of the reconstructed baseline relative to the tube's v.
inline constexpr double kBaselineSharpness = 20.0;

/// Reconstruction of the earlier step-like circumvent behaviour: the lower
/// bound follows rho and jumps to the detour level psi through a tanh ramp of
/// time scale v / 20 centred half a buffer after t1, then jumps back centred
/// half a buffer before t2. Same plans, width and sampling as the smooth tube.
Tube baseline_tube(const TubeProblem& problem);

}  // namespace stt
