#pragma once

#include "stt/io.hpp"
#include "stt/metrics.hpp"
#include "stt/plant.hpp"
#include "stt/tube.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace stt {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitGuarantee = 3,
    kExitRuntime = 4,
};

/// Command-line values that take precedence over the scenario file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;  // simulation step (run.dt)
    std::optional<double> stay_horizon;
    std::optional<std::filesystem::path> out_dir;
};

/// Applies overrides and re-validates the touched values.
void apply_overrides(Scenario& sc, const Overrides& ov);

/// A synthesized tube together with its checks.
struct Synthesis {
    TubeProblem problem;
    Tube tube;        // task dimensions
    Tube state_tube;  // plant state dimensions
    ValidationReport assumptions;
    VerificationReport verification;
    SmoothnessReport smoothness;
};

/// Plans, integrates and checks the tube. Propagates ConfigError,
/// InfeasibleScenario, AssumptionViolation and SynthesisFailure.
Synthesis synthesize(const Scenario& sc);

/// Closed-loop run of the scenario's plant inside `task_tube`.
SimTrace run_closed_loop(const Scenario& sc, const Synthesis& syn, const Tube& task_tube);

/// Smooth and reconstructed-baseline runs with identical seed, gain and step.
struct Comparison {
    SimTrace smooth;
    SimTrace baseline;
    EffortReport smooth_effort;
    EffortReport baseline_effort;
    SmoothnessReport baseline_smoothness;
    VerificationReport baseline_verification;

    bool ordered() const
    {
        return smooth_effort.energy < baseline_effort.energy &&
               smooth_effort.peak < baseline_effort.peak;
    }
};

Comparison compare_efforts(const Scenario& sc, const Synthesis& syn);

/// Subcommands. Each writes its artifacts into `out_dir`, a short summary to
/// `log`, and returns an ExitCode. Errors propagate as exceptions.
int command_synthesize(const Scenario& sc, const std::filesystem::path& out_dir, std::ostream& log);
int command_simulate(const Scenario& sc, const std::filesystem::path& out_dir, std::ostream& log);
int command_verify(const Scenario& sc, const std::filesystem::path& tube_csv,
                   const std::filesystem::path& out_dir, std::ostream& log);
int command_compare(const Scenario& sc, const std::filesystem::path& out_dir, std::ostream& log);

struct Invocation {
    std::string command;
    std::filesystem::path scenario;
    std::optional<std::filesystem::path> tube_csv;  // verify only
    Overrides overrides;
};

/// Parses the scenario, dispatches, and maps every error to an exit code
/// with a structured message on `err`.
int run_invocation(const Invocation& inv, std::ostream& log, std::ostream& err);

/// Runs `inv.command` for every *.scenario file in `dir` concurrently; each
/// gets its own output subdirectory named after the file. Returns the
/// largest exit code.
int run_batch(const Invocation& inv, const std::filesystem::path& dir, std::ostream& log,
              std::ostream& err);

}  // namespace stt
