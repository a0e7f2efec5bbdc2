#pragma once

#include "stt/scenario.hpp"
#include "stt/tube.hpp"

#include <optional>
#include <span>

namespace stt {

struct ControllerConfig {
    double kappa = 2.0;
    int gain_sign = 1;              // -1 when the input gain's symmetric part is negative definite
    std::optional<double> u_max;    // per-component saturation, off by default
};

/// Throws ConfigError naming controller.* keys.
void validate_controller(const ControllerConfig& cfg);

/// e_i = (2 x_i - (gamma_U + gamma_L)) / (gamma_U - gamma_L).
Vec normalized_error(std::span<const double> x, const TubeFrame& frame);

/// eps_i = ln((1 + e_i) / (1 - e_i)). Throws TubeViolation when |e_i| >= 1;
/// `t` only labels the error.
Vec transformed_error(std::span<const double> e, double t = 0.0);

/// Diagonal of xi: 4 / (gamma_d,i (1 - e_i^2)).
Vec gain_diagonal(std::span<const double> e, const TubeFrame& frame);

/// u = -gain_sign * kappa * xi * eps. Reads nothing but the state, the tube
/// frame and the gains.
Vec control_input(std::span<const double> x, const TubeFrame& frame, const ControllerConfig& cfg);

}  // namespace stt
