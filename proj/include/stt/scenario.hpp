#pragma once

#include "stt/errors.hpp"
#include "stt/geometry.hpp"
#include "stt/plan.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace stt {

using Vec = std::vector<double>;

/// Prescribed-time reach-avoid-stay task over the constrained dimensions.
///
/// All boxes, points and margins live in task coordinates (one entry per
/// constrained dimension). `state_dims[i]` is the plant state index that
/// task dimension i refers to.
struct RasTask {
    Box initial;
    Box target;
    std::vector<Box> unsafe;
    double t_c = 0.0;
    Vec x0;
    Vec eta;
    Vec d_s;
    Vec d_t;
    Vec d_u;  // one per unsafe set
    Box workspace;
    std::vector<std::size_t> state_dims;

    std::size_t dims() const { return initial.size(); }
};

/// Tube shaping and integration parameters, all in seconds.
struct TubeParams {
    double delta = 0.0;     // margin around each intersection window
    double delta_t = 0.0;   // buffer compensating the tanh switching
    double v = 0.0;         // switching time scale of the activation weights
    double eps_den = 0.0;   // floor of the shaper denominators
    double dt = 0.0;        // integration and sampling step
    double track_tau = 0.0; // time constant pulling the tube back onto rho

    /// Defaults scaled to the prescribed time.
    static TubeParams defaults(double t_c);
};

/// Throws ConfigError listing every violated task invariant.
void validate_task(const RasTask& task);

/// Returns the violated parameter invariants (empty when valid).
std::vector<ConfigIssue> check_tube_params(const TubeParams& params);

/// A box centred on a point, shrunk where the requested half-extent would
/// leave the enclosing set.
struct CenteredBox {
    Box box;
    Vec half_extent;                // effective half-extent per dimension
    std::vector<std::size_t> shrunk; // dimensions where the request was reduced
};

/// Ŝ = ∏ [x0_i - d_S,i, x0_i + d_S,i] ⊆ S. Throws ConfigError("task.x0")
/// when x0 is not strictly inside S.
CenteredBox build_initial_box(const RasTask& task);

/// T̂ = ∏ [eta_i - d_T,i, eta_i + d_T,i] ⊆ T. Throws ConfigError("task.eta")
/// when eta is not strictly inside T.
CenteredBox build_target_box(const RasTask& task);

/// Outcome of the start/target separation check for one obstacle.
struct SeparationCheck {
    std::size_t obstacle = 0;
    bool pass = false;
    std::optional<std::size_t> witness_dim;  // first dimension that separates
};

/// Outcome of the temporal separation check for one pair of plans.
struct TemporalCheck {
    std::size_t first = 0;
    std::size_t second = 0;
    double gap = 0.0;       // signed distance between the two windows
    double required = 0.0;  // 2 Delta
    bool pass = false;
};

struct ValidationReport {
    std::vector<SeparationCheck> initial_separation;
    std::vector<SeparationCheck> target_separation;
    std::vector<TemporalCheck> temporal;
    std::vector<std::size_t> initial_shrunk;
    std::vector<std::size_t> target_shrunk;

    bool separation_ok() const;
    bool temporal_ok() const;
    bool ok() const { return separation_ok() && temporal_ok(); }
};

/// Checks per-obstacle dimension separation of Ŝ and T̂ and pairwise temporal
/// separation of non-empty plans. Never throws on a failed check.
ValidationReport validate_assumptions(const RasTask& task, const TubeParams& params,
                                      const std::vector<ObstaclePlan>& plans);

}  // namespace stt
