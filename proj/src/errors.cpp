#include "stt/errors.hpp"

#include <sstream>

namespace stt {

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues)
{
    std::ostringstream os;
    for (std::size_t k = 0; k < issues.size(); ++k) {
        if (k)
            os << "; ";
        os << issues[k].path << ": " << issues[k].message;
    }
    return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues))
{
}

ConfigError::ConfigError(std::string path, std::string message)
    : ConfigError(std::vector<ConfigIssue>{{std::move(path), std::move(message)}})
{
}

SynthesisFailure::SynthesisFailure(double time, const std::string& what)
    : std::runtime_error(what + " (t=" + std::to_string(time) + ")"), time_(time)
{
}

TubeViolation::TubeViolation(std::size_t dim, double time, double normalized_error)
    : std::runtime_error("state left the tube in dimension " + std::to_string(dim + 1) +
                         " at t=" + std::to_string(time) + " (e=" +
                         std::to_string(normalized_error) + ")"),
      dim_(dim), time_(time), e_(normalized_error)
{
}

}  // namespace stt
