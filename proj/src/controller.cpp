#include "stt/controller.hpp"

#include "stt/errors.hpp"

#include <algorithm>
#include <cmath>

namespace stt {

void validate_controller(const ControllerConfig& cfg)
{
    std::vector<ConfigIssue> issues;
    if (!(cfg.kappa > 0.0) || !std::isfinite(cfg.kappa))
        issues.push_back({"controller.kappa", "must be positive"});
    if (cfg.gain_sign != 1 && cfg.gain_sign != -1)
        issues.push_back({"controller.gain_sign", "must be +1 or -1"});
    if (cfg.u_max && !(*cfg.u_max > 0.0))
        issues.push_back({"controller.u_max", "must be positive when given"});
    if (!issues.empty())
        throw ConfigError(std::move(issues));
}

Vec normalized_error(std::span<const double> x, const TubeFrame& frame)
{
    Vec e(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        e[i] = (2.0 * x[i] - frame.sum(i)) / frame.width(i);
    return e;
}

Vec transformed_error(std::span<const double> e, double t)
{
    Vec eps(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!(std::abs(e[i]) < 1.0))
            throw TubeViolation(i, t, e[i]);
        eps[i] = std::log((1.0 + e[i]) / (1.0 - e[i]));
    }
    return eps;
}

Vec gain_diagonal(std::span<const double> e, const TubeFrame& frame)
{
    Vec xi(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!(std::abs(e[i]) < 1.0))
            throw TubeViolation(i, frame.t, e[i]);
        xi[i] = 4.0 / (frame.width(i) * (1.0 - e[i] * e[i]));
    }
    return xi;
}

Vec control_input(std::span<const double> x, const TubeFrame& frame, const ControllerConfig& cfg)
{
    const Vec e = normalized_error(x, frame);
    const Vec eps = transformed_error(e, frame.t);
    const Vec xi = gain_diagonal(e, frame);
    Vec u(x.size());
    const double gain = -static_cast<double>(cfg.gain_sign) * cfg.kappa;
    for (std::size_t i = 0; i < x.size(); ++i) {
        u[i] = gain * xi[i] * eps[i];
        if (cfg.u_max)
            u[i] = std::clamp(u[i], -*cfg.u_max, *cfg.u_max);
    }
    return u;
}

}  // namespace stt
