#pragma once

#include "stt/controller.hpp"
#include "stt/metrics.hpp"
#include "stt/plant.hpp"
#include "stt/scenario.hpp"
#include "stt/tube.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stt {

struct PlantConfig {
    std::string model = "omni";
    std::size_t state_dims = 0;
    Vec initial_state;                // full plant state at t = 0
    std::vector<Interval> free_bounds; // one per state dimension, empty for constrained ones
    DisturbanceModel disturbance;
};

struct RunConfig {
    double dt = 0.01;
    double stay_horizon = 0.0;
    std::string output_dir = "out";
};

/// Everything one scenario file describes, validated.
struct Scenario {
    std::string name;
    RasTask task;
    TubeParams tube;
    ControllerConfig controller;
    PlantConfig plant;
    RunConfig run;
};

/// Parses a scenario document (JSON, comments allowed). Unknown keys,
/// missing keys and violated invariants are collected and thrown together
/// as one ConfigError, each issue keyed by its dotted path.
Scenario parse_scenario_text(const std::string& text, const std::string& fallback_name = "scenario");
Scenario parse_scenario(const std::filesystem::path& path);

/// %.17g, the round-trip formatting used in every output file.
std::string format_number(double x);

void write_tube_csv(std::ostream& os, const Tube& tube);
/// Reads a tube written by write_tube_csv. The time column must be uniform.
/// Throws ConfigError("tube_csv", ...) on malformed input.
Tube read_tube_csv(std::istream& is);

void write_trace_csv(std::ostream& os, const SimTrace& trace);

}  // namespace stt
