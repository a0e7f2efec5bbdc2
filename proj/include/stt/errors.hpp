#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stt {

/// One problem found while validating configuration, keyed by a dotted path
/// such as "tube.delta_t" or "task.x0".
struct ConfigIssue {
    std::string path;
    std::string message;
};

/// Invalid input: malformed scenario, violated invariants, dimension mismatch.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    ConfigError(std::string path, std::string message);

    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// The task is well formed but no tube satisfying the avoidance rules exists
/// for it (no safe detour side, overlapping avoidance windows, ...).
class InfeasibleScenario : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// More than one avoidance plan is in force at the same instant.
class AssumptionViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tube integration produced non-finite values.
class SynthesisFailure : public std::runtime_error {
public:
    SynthesisFailure(double time, const std::string& what);
    double time() const { return time_; }

private:
    double time_;
};

/// The state left the tube: |e_i| >= 1 in some dimension.
class TubeViolation : public std::runtime_error {
public:
    TubeViolation(std::size_t dim, double time, double normalized_error);
    std::size_t dim() const { return dim_; }
    double time() const { return time_; }
    double normalized_error() const { return e_; }

private:
    std::size_t dim_;
    double time_;
    double e_;
};

}  // namespace stt
