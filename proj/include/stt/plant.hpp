#pragma once

#include "stt/controller.hpp"
#include "stt/scenario.hpp"
#include "stt/tube.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace stt {

/// Control-affine plant x' = f(x) + g(x) u + w.
class Dynamics {
public:
    virtual ~Dynamics() = default;
    virtual std::size_t dims() const = 0;
    virtual Vec derivative(std::span<const double> x, std::span<const double> u,
                           std::span<const double> w) const = 0;
    /// Smallest eigenvalue of (g(x) + g(x)^T) / 2.
    virtual double input_gain_min_eig(std::span<const double> x) const = 0;
    virtual std::string name() const = 0;
};

/// Planar omnidirectional robot: body-frame velocities rotated by the heading x3.
class OmniRobot final : public Dynamics {
public:
    std::size_t dims() const override { return 3; }
    Vec derivative(std::span<const double> x, std::span<const double> u,
                   std::span<const double> w) const override;
    double input_gain_min_eig(std::span<const double> x) const override;
    std::string name() const override { return "omni"; }
};

/// x' = a x + u + w componentwise, with a fixed per-dimension drift rate.
class SingleIntegrator final : public Dynamics {
public:
    explicit SingleIntegrator(std::size_t n, double drift = 0.0) : n_(n), drift_(drift) {}
    std::size_t dims() const override { return n_; }
    Vec derivative(std::span<const double> x, std::span<const double> u,
                   std::span<const double> w) const override;
    double input_gain_min_eig(std::span<const double>) const override { return 1.0; }
    std::string name() const override { return "integrator"; }

private:
    std::size_t n_;
    double drift_;
};

/// Builds "omni" or "integrator"; throws ConfigError("plant.model") otherwise.
std::unique_ptr<Dynamics> make_dynamics(const std::string& model, std::size_t state_dims);

enum class DisturbanceKind { None, Uniform, Sinusoidal };

DisturbanceKind parse_disturbance_kind(const std::string& s);
std::string to_string(DisturbanceKind kind);

struct DisturbanceModel {
    DisturbanceKind kind = DisturbanceKind::None;
    double bound = 0.0;
    std::uint64_t seed = 0;
    double frequency = 0.1;  // Hz, sinusoidal only
    double phase = 0.0;      // rad, offset per component is added on top
};

void validate_disturbance(const DisturbanceModel& model);

/// Stateful sampler: deterministic given the model and the call sequence.
class DisturbanceSource {
public:
    DisturbanceSource(const DisturbanceModel& model, std::size_t dims);
    Vec sample(double t);

private:
    DisturbanceModel model_;
    std::size_t dims_;
    std::mt19937_64 rng_;
};

struct SimOptions {
    double dt = 0.01;            // macro step: disturbance hold period
    double stay_horizon = 0.0;   // simulated time past t_c
    std::size_t max_substeps = 4096;
};

void validate_sim_options(const SimOptions& opts);

struct SimFailure {
    double time = 0.0;
    std::string reason;
    std::optional<std::size_t> dim;
    std::optional<double> normalized_error;
};

/// One row per integration step, including the state at t = 0.
struct SimTrace {
    std::size_t state_dims = 0;
    Vec t;
    std::vector<Vec> x;
    std::vector<Vec> lower;
    std::vector<Vec> upper;
    std::vector<Vec> u;
    std::vector<Vec> w;
    std::vector<int> active;  // 1-based obstacle index, 0 when none

    bool completed = false;
    bool reached = false;     // x in T at some sample with t <= t_c
    bool safe = true;         // x outside every unsafe set at every sample
    bool contained = true;    // x strictly inside the tube at every sample
    bool stayed = false;      // x in T at every sample with t >= t_c
    std::optional<double> reach_time;
    double min_gain_eig = 0.0;
    double max_disturbance = 0.0;
    std::optional<SimFailure> failure;

    std::size_t rows() const { return t.size(); }
    bool ok() const { return completed && reached && safe && contained && stayed; }
};

/// Closed loop with the tube controller.
///
/// The disturbance is drawn once per macro step and held. Each macro step is
/// split into equal RK4 substeps, each with its own zero-order-hold control
/// input, so that neither the barrier gain nor the tube motion outruns the
/// step. Throws ConfigError when x(0) is not strictly inside Γ(0); tube
/// violations and non-finite states end the run with a failure record.
SimTrace simulate(const RasTask& task, const Tube& state_tube, const std::vector<ObstaclePlan>& plans,
                  const ControllerConfig& cfg, const Dynamics& dynamics,
                  const DisturbanceModel& disturbance, std::span<const double> x_init,
                  const SimOptions& opts);

/// One classical RK4 step with u and w held.
Vec rk4_step(const Dynamics& dynamics, std::span<const double> x, std::span<const double> u,
             std::span<const double> w, double h);

}  // namespace stt
