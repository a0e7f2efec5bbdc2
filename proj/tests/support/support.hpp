#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.

#include "stt/app.hpp"
#include "stt/avoidance.hpp"
#include "stt/io.hpp"
#include "stt/tube.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>

namespace stt::testing {

/// Bundled scenario files.
std::string scenario_path(const std::string& file);
Scenario case_study();

/// A randomized task with tube parameters chosen for it.
struct RandomScenario {
    RasTask task;
    TubeParams params;
    std::uint64_t draw = 0;  // attempts consumed, for diagnostics
};

/// n in {2, 3}, one to three obstacles placed around the nominal path.
/// Candidates that break the start/target separation or the window
/// spacing, or admit no safe detour, are rejected and redrawn.
RandomScenario random_scenario(std::mt19937_64& rng);

/// A random task (no obstacles needed) plus one box near its path, which
/// the band may or may not meet.
struct RandomPair {
    Corridor corridor;
    Box obstacle;
};
RandomPair random_pair(std::mt19937_64& rng);

/// Margin obtained by integrating rho' = t_c D / (t_c - t)^2 sech^2(t / (t_c - t))
/// with classical RK4 at `steps` uniform steps; returns samples at k h.
Vec integrate_margin(double start, double end, double t_c, double t_end, std::size_t steps);

/// Band overlap window of an obstacle, found by sampling `samples` times on
/// [0, t_c] and testing the band box against the obstacle directly.
std::optional<TimeWindow> grid_window(const Corridor& corridor, const Box& obstacle,
                                      std::size_t samples);

/// Worst errors of one detour against its levels.
struct DetourErrors {
    double at_entry = 0.0;    // |gamma_k(t_in) - psi|
    double held = 0.0;        // sup over [t_in, t_out] of |gamma_k - psi|
    double returned = 0.0;    // |gamma_k(t2 + delta_t) - rho_k(t2 + delta_t)|
    double settled = 0.0;     // sup of the same over [t2 + delta_t, next t1 - delta_t], diagnostic only
    double tolerance = 0.0;   // 1e-3 (|psi - rho_k(t1)| + 1)

    bool pass() const { return at_entry <= tolerance && held <= tolerance && returned <= tolerance; }
};
std::vector<DetourErrors> detour_errors(const TubeProblem& problem, const Tube& tube);

}  // namespace stt::testing
