#pragma once

#include "stt/avoidance.hpp"
#include "stt/plan.hpp"
#include "stt/reach_tube.hpp"
#include "stt/scenario.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace stt {

/// s(t) = 0.5 tanh(t / v).
double smoothstep(double t, double v);

/// Blend weights of the three tube phases for one plan.
struct ActivationWeights {
    double track = 0.0;     // follow the reachability margin
    double approach = 0.0;  // bend towards the detour level
    double retreat = 0.0;   // bend back to the margin
};

ActivationWeights activation_weights(const ObstaclePlan& plan, const TubeParams& params, double t);

/// Approach target: tanh blend from rho_k(t1) to psi over [t1, t_in], psi
/// afterwards, rho_k(t1) before t1.
double approach_target(const ObstaclePlan& plan, double t);

/// Return target: tanh blend from psi to rho_k(t2) over [t_out, t2],
/// rho_k(t2) afterwards, psi before t_out.
double return_target(const ObstaclePlan& plan, double t);

/// (h1(t) - gamma) / max(t_in - t, eps_den).
double approach_shaper(const ObstaclePlan& plan, const TubeParams& params, double t,
                       double gamma_now);

/// (h2(t) - gamma) / max(t2 - t, eps_den).
double return_shaper(const ObstaclePlan& plan, const TubeParams& params, double t,
                     double gamma_now);

/// Everything needed to integrate the tube's lower bound.
struct TubeProblem {
    Corridor corridor;
    std::vector<ObstaclePlan> plans;  // non-empty, sorted by t_in
    TubeParams params;
};

/// Builds the corridor and the obstacle schedule. Propagates ConfigError
/// and InfeasibleScenario.
TubeProblem make_problem(const RasTask& task, const TubeParams& params);

/// Right-hand side of the lower-bound ODE.
///
/// Outside avoidance windows every dimension follows rho' plus a relaxation
/// (rho - gamma) / track_tau that is zero on the nominal trajectory. In the
/// active plan's dimension the three phase terms are blended by the
/// activation weights. Throws AssumptionViolation when two plans' windows
/// both contain t.
Vec gamma_derivative(const TubeProblem& problem, std::span<const double> gamma, double t);

/// Tube bounds at one instant.
struct TubeFrame {
    double t = 0.0;
    Vec lower;
    Vec upper;

    double sum(std::size_t i) const { return upper[i] + lower[i]; }
    double width(std::size_t i) const { return upper[i] - lower[i]; }
};

/// Uniformly sampled tube with linear interpolation between samples. Queries
/// outside [0, end_time()] clamp to the first or last sample.
class Tube {
public:
    Tube() = default;
    /// lower[i][k], upper[i][k] at t = k dt. `lower_rate` may be empty, in
    /// which case rates come from finite differences.
    Tube(double dt, std::vector<Vec> lower, std::vector<Vec> upper,
         std::vector<Vec> lower_rate = {});

    std::size_t dims() const { return lower_.size(); }
    std::size_t samples() const { return lower_.empty() ? 0 : lower_.front().size(); }
    double dt() const { return dt_; }
    double end_time() const { return dt_ * static_cast<double>(samples() - 1); }
    double time(std::size_t k) const { return dt_ * static_cast<double>(k); }

    double lower(std::size_t i, std::size_t k) const { return lower_[i][k]; }
    double upper(std::size_t i, std::size_t k) const { return upper_[i][k]; }
    const Vec& lower_series(std::size_t i) const { return lower_[i]; }
    const Vec& upper_series(std::size_t i) const { return upper_[i]; }

    TubeFrame frame(double t) const;
    double lower_at(std::size_t i, double t) const;
    double lower_rate(std::size_t i, double t) const;

    /// Box Γ at sample k.
    Box box(std::size_t k) const;

private:
    double interpolate(const Vec& series, double t) const;

    double dt_ = 0.0;
    std::vector<Vec> lower_;
    std::vector<Vec> upper_;
    std::vector<Vec> rate_;
};

/// Integrates the lower bound with fixed-step RK4 on [0, t_c] from
/// gamma(0) = rho(0) and attaches gamma_U = gamma_L + band width. The step
/// is adjusted so that the last sample falls exactly on t_c. Throws
/// SynthesisFailure on non-finite values.
Tube evolve_tube(const TubeProblem& problem);

/// Places a task-space tube into plant state space; the remaining state
/// dimensions get the constant bounds in `free_bounds` (in state order).
Tube embed_tube(const Tube& task_tube, std::size_t state_dims,
                const std::vector<std::size_t>& task_to_state,
                const std::vector<Interval>& free_bounds);

/// Extracts the task dimensions from a state-space tube.
Tube project_tube(const Tube& state_tube, const std::vector<std::size_t>& task_to_state);

/// Default tolerance on the start/target containment slack.
inline constexpr double kContainmentSlack = 1e-6;

struct ConditionReport {
    bool pass = true;
    double worst_margin = 0.0;
    std::vector<double> violation_times;  // at most kMaxViolationTimes entries
    std::size_t violations = 0;
};

inline constexpr std::size_t kMaxViolationTimes = 64;

/// Tube guarantees on the sample grid:
///   initial  Γ(0) ⊆ S
///   target   Γ(t_c) ⊆ T
///   avoid    Γ(t) ∩ U = ∅ at every sample (touching counts as a hit)
///   ordering gamma_L < gamma_U at every sample
struct VerificationReport {
    ConditionReport initial;
    ConditionReport target;
    ConditionReport avoid;
    ConditionReport ordering;

    bool pass() const { return initial.pass && target.pass && avoid.pass && ordering.pass; }
};

VerificationReport verify_tube(const Tube& tube, const RasTask& task,
                               double slack = kContainmentSlack);

struct DimensionSmoothness {
    double max_rate = 0.0;  // max |Δγ| / dt
    double max_jump = 0.0;  // max |Δγ|
    double p99_rate = 0.0;
    double bound = 0.0;     // 10 x p99_rate
    std::vector<double> flagged_times;
};

/// Finite-difference smoothness of each lower bound: a step is flagged when
/// |Δγ| exceeds bound * dt.
struct SmoothnessReport {
    std::vector<DimensionSmoothness> dims;

    std::size_t flagged() const;
    /// Flagged steps falling inside [lo, hi].
    std::size_t flagged_between(double lo, double hi) const;
};

SmoothnessReport smoothness_check(const Tube& tube);

}  // namespace stt
