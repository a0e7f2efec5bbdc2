#pragma once

#include "stt/plan.hpp"
#include "stt/reach_tube.hpp"
#include "stt/scenario.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace stt {

/// Closed time window [lo, hi]; units depend on context (fractions of t_c or
/// seconds).
struct TimeWindow {
    double lo = 0.0;
    double hi = 0.0;
};

/// Crossing fractions of the nominal band in dimension i against the
/// obstacle's projection, in the order
///   lower edge reaches the obstacle's low face,
///   lower edge reaches the obstacle's high face,
///   upper edge reaches the obstacle's low face,
///   upper edge reaches the obstacle's high face.
/// Each value is atanh(r)/(1 + atanh(r)) for the level ratio r, clamped to
/// 0 for r <= 0 and 1 for r >= 1.
std::array<double, 4> crossing_fractions(const Corridor& corridor, const Box& obstacle,
                                         std::size_t i);

/// Fractions of t_c during which the nominal band overlaps the obstacle's
/// projection in dimension i; nullopt when it never does.
std::optional<TimeWindow> dimension_window(const Corridor& corridor, const Box& obstacle,
                                           std::size_t i);

/// [t_in, t_out] in seconds: max over dimensions of the entry fraction and
/// min over dimensions of the exit fraction, scaled by t_c. nullopt when the
/// band never meets the obstacle in all dimensions at once.
std::optional<TimeWindow> intersection_interval(const Corridor& corridor, const Box& obstacle);

/// Three-step dimension rule: i1 = argmax entry, i2 = argmin exit, then the
/// one of the two with the narrower window. Ties go to the lower index.
/// Precondition: the intersection interval is non-empty.
std::size_t select_dimension(const Corridor& corridor, const Box& obstacle);

/// Lower-bound level that clears the obstacle by d_u on the given side.
double detour_level(const Corridor& corridor, const Box& obstacle, double d_u, std::size_t k,
                    Side side);

/// Everything the side/dimension choice needs about one obstacle.
struct DetourQuery {
    const Corridor* corridor = nullptr;
    const Box* obstacle = nullptr;
    const Box* workspace = nullptr;
    double d_u = 0.0;
    double delta = 0.0;
};

/// Sides usable for a detour in dimension k: the held band fits in the
/// workspace, and neither the approach nor the return sweeps the tube across
/// the obstacle while every other dimension still overlaps it.
std::vector<Side> feasible_sides(const DetourQuery& query, std::size_t k);

/// Among feasible sides, the one whose level is closest to rho_k(t_in).
/// Throws InfeasibleScenario when no side is feasible.
Side select_side(const DetourQuery& query, std::size_t k);

/// Full plan for unsafe set j (empty plan when the band never meets it).
/// Throws InfeasibleScenario when no dimension admits a safe detour or the
/// detour window does not fit inside (0, t_c).
ObstaclePlan plan_obstacle(const RasTask& task, const Corridor& corridor,
                           const TubeParams& params, std::size_t j);

/// Non-empty plans sorted by t_in. Throws InfeasibleScenario when two
/// windows are closer than 2 Delta.
std::vector<ObstaclePlan> schedule(const RasTask& task, const TubeParams& params);

/// Same as schedule() but also keeps empty plans, unsorted and unchecked.
std::vector<ObstaclePlan> plan_all(const RasTask& task, const TubeParams& params);

/// The plan in force at time t: smallest t_in among plans with t2 > t.
const ObstaclePlan* active_plan(const std::vector<ObstaclePlan>& sorted_plans, double t);

}  // namespace stt
