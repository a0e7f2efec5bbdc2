#include "stt/plant.hpp"

#include "stt/avoidance.hpp"
#include "stt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stt {

Vec OmniRobot::derivative(std::span<const double> x, std::span<const double> u,
                          std::span<const double> w) const
{
    const double c = std::cos(x[2]);
    const double s = std::sin(x[2]);
    return {c * u[0] - s * u[1] + w[0], s * u[0] + c * u[1] + w[1], u[2] + w[2]};
}

double OmniRobot::input_gain_min_eig(std::span<const double> x) const
{
    // Symmetric part of the rotation block is cos(x3) I, the heading row is 1.
    return std::min(std::cos(x[2]), 1.0);
}

Vec SingleIntegrator::derivative(std::span<const double> x, std::span<const double> u,
                                 std::span<const double> w) const
{
    Vec dx(n_);
    for (std::size_t i = 0; i < n_; ++i)
        dx[i] = drift_ * x[i] + u[i] + w[i];
    return dx;
}

std::unique_ptr<Dynamics> make_dynamics(const std::string& model, std::size_t state_dims)
{
    if (model == "omni") {
        if (state_dims != 3)
            throw ConfigError("plant.model", "omni robot has 3 states, scenario has " +
                                                 std::to_string(state_dims));
        return std::make_unique<OmniRobot>();
    }
    if (model == "integrator")
        return std::make_unique<SingleIntegrator>(state_dims);
    throw ConfigError("plant.model", "unknown model '" + model + "' (expected omni or integrator)");
}

DisturbanceKind parse_disturbance_kind(const std::string& s)
{
    if (s == "none")
        return DisturbanceKind::None;
    if (s == "uniform")
        return DisturbanceKind::Uniform;
    if (s == "sinusoidal")
        return DisturbanceKind::Sinusoidal;
    throw ConfigError("plant.disturbance.kind",
                      "unknown kind '" + s + "' (expected none, uniform or sinusoidal)");
}

std::string to_string(DisturbanceKind kind)
{
    switch (kind) {
    case DisturbanceKind::None: return "none";
    case DisturbanceKind::Uniform: return "uniform";
    case DisturbanceKind::Sinusoidal: return "sinusoidal";
    }
    return "none";
}

void validate_disturbance(const DisturbanceModel& model)
{
    std::vector<ConfigIssue> issues;
    if (!(model.bound >= 0.0) || !std::isfinite(model.bound))
        issues.push_back({"plant.disturbance.bound", "must be finite and nonnegative"});
    if (model.kind == DisturbanceKind::Sinusoidal &&
        (!(model.frequency > 0.0) || !std::isfinite(model.frequency)))
        issues.push_back({"plant.disturbance.frequency", "must be positive"});
    if (!std::isfinite(model.phase))
        issues.push_back({"plant.disturbance.phase", "must be finite"});
    if (!issues.empty())
        throw ConfigError(std::move(issues));
}

DisturbanceSource::DisturbanceSource(const DisturbanceModel& model, std::size_t dims)
    : model_(model), dims_(dims), rng_(model.seed)
{
}

Vec DisturbanceSource::sample(double t)
{
    Vec w(dims_, 0.0);
    switch (model_.kind) {
    case DisturbanceKind::None:
        break;
    case DisturbanceKind::Uniform: {
        std::uniform_real_distribution<double> dist(-model_.bound, model_.bound);
        for (auto& wi : w)
            wi = dist(rng_);
        break;
    }
    case DisturbanceKind::Sinusoidal:
        for (std::size_t i = 0; i < dims_; ++i) {
            const double offset = 2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(dims_);
            w[i] = model_.bound *
                   std::sin(2.0 * std::numbers::pi * model_.frequency * t + model_.phase + offset);
        }
        break;
    }
    return w;
}

void validate_sim_options(const SimOptions& opts)
{
    std::vector<ConfigIssue> issues;
    if (!(opts.dt > 0.0) || !std::isfinite(opts.dt))
        issues.push_back({"run.dt", "must be positive"});
    if (!(opts.stay_horizon >= 0.0) || !std::isfinite(opts.stay_horizon))
        issues.push_back({"run.stay_horizon", "must be nonnegative"});
    if (opts.max_substeps == 0)
        issues.push_back({"run.max_substeps", "must be positive"});
    if (!issues.empty())
        throw ConfigError(std::move(issues));
}

Vec rk4_step(const Dynamics& dynamics, std::span<const double> x, std::span<const double> u,
             std::span<const double> w, double h)
{
    const std::size_t n = x.size();
    auto shifted = [&](const Vec& k, double a) {
        Vec y(n);
        for (std::size_t i = 0; i < n; ++i)
            y[i] = x[i] + a * k[i];
        return y;
    };
    const Vec k1 = dynamics.derivative(x, u, w);
    const Vec k2 = dynamics.derivative(shifted(k1, h / 2), u, w);
    const Vec k3 = dynamics.derivative(shifted(k2, h / 2), u, w);
    const Vec k4 = dynamics.derivative(shifted(k3, h), u, w);
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

namespace {

// Largest substep that keeps the held input from overshooting: the loop gain
// du/dx of the barrier law and the relative speed of the tube both bound it.
double stable_substep(const TubeFrame& frame, std::span<const double> e, const Tube& tube,
                      const ControllerConfig& cfg, double t, double dt)
{
    double gain = 0.0;
    double drift = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double width = frame.width(i);
        const double one_minus = 1.0 - e[i] * e[i];
        const double eps = std::log((1.0 + e[i]) / (1.0 - e[i]));
        gain = std::max(gain, cfg.kappa * 16.0 / (width * width) * (1.0 + e[i] * eps) /
                                  (one_minus * one_minus));
        for (double probe : {t, t + 0.5 * dt, t + dt})
            drift = std::max(drift, std::abs(tube.lower_rate(i, probe)) / width);
    }
    double h = dt;
    if (gain > 0.0)
        h = std::min(h, 0.5 / gain);
    if (drift > 0.0)
        h = std::min(h, 0.05 / drift);
    return h;
}

Vec task_point(const RasTask& task, const Vec& x)
{
    Vec p(task.dims());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = x[task.state_dims[i]];
    return p;
}

int active_label(const std::vector<ObstaclePlan>& plans, double t)
{
    for (const auto& plan : plans)
        if (!plan.empty && t >= plan.t1 && t <= plan.t2)
            return static_cast<int>(plan.obstacle) + 1;
    return 0;
}

// Macro-step boundaries on [0, t_end] with t_c always among them.
Vec macro_grid(double t_c, double t_end, double dt)
{
    Vec grid;
    auto fill = [&](double from, double to) {
        const double span = to - from;
        const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
        for (std::size_t k = 0; k < steps; ++k)
            grid.push_back(from + dt * static_cast<double>(k));
    };
    fill(0.0, t_c);
    if (t_end > t_c)
        fill(t_c, t_end);
    grid.push_back(t_end);
    return grid;
}

}  // namespace

SimTrace simulate(const RasTask& task, const Tube& state_tube, const std::vector<ObstaclePlan>& plans,
                  const ControllerConfig& cfg, const Dynamics& dynamics,
                  const DisturbanceModel& disturbance, std::span<const double> x_init,
                  const SimOptions& opts)
{
    validate_controller(cfg);
    validate_disturbance(disturbance);
    validate_sim_options(opts);
    const std::size_t n = dynamics.dims();
    if (x_init.size() != n || state_tube.dims() != n)
        throw ConfigError("plant.initial_state", "state, tube and plant dimensions differ");
    for (std::size_t i = 0; i < task.dims(); ++i)
        if (task.state_dims[i] >= n)
            throw ConfigError("task.constrained_dims", "index beyond the plant state");

    {
        const TubeFrame f0 = state_tube.frame(0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (!(x_init[i] > f0.lower[i] && x_init[i] < f0.upper[i]))
                throw ConfigError("plant.initial_state",
                                  "x(0) is not strictly inside the tube at t = 0 (dimension " +
                                      std::to_string(i + 1) + ")");
    }

    SimTrace tr;
    tr.state_dims = n;
    tr.min_gain_eig = dynamics.input_gain_min_eig(x_init);
    const double t_c = task.t_c;
    const double t_end = t_c + opts.stay_horizon;
    const double tiny = 1e-9 * opts.dt;
    const Vec grid = macro_grid(t_c, t_end, opts.dt);

    DisturbanceSource source(disturbance, n);
    Vec x(x_init.begin(), x_init.end());
    bool stay_checked = false;
    bool stay_ok = true;

    auto record = [&](double t, const TubeFrame& frame, const Vec& u, const Vec& w) {
        tr.t.push_back(t);
        tr.x.push_back(x);
        tr.lower.push_back(frame.lower);
        tr.upper.push_back(frame.upper);
        tr.u.push_back(u);
        tr.w.push_back(w);
        tr.active.push_back(active_label(plans, t));
        for (double wi : w)
            tr.max_disturbance = std::max(tr.max_disturbance, std::abs(wi));
        tr.min_gain_eig = std::min(tr.min_gain_eig, dynamics.input_gain_min_eig(x));

        const Vec p = task_point(task, x);
        const bool in_target = task.target.contains_point(p);
        if (t <= t_c && in_target && !tr.reached) {
            tr.reached = true;
            tr.reach_time = t;
        }
        for (const auto& obstacle : task.unsafe)
            if (obstacle.contains_point(p))
                tr.safe = false;
        if (t >= t_c) {
            stay_checked = true;
            stay_ok = stay_ok && in_target;
        }
    };

    auto fail = [&](double t, std::string reason, std::optional<std::size_t> dim = {},
                    std::optional<double> e = {}) {
        tr.failure = SimFailure{t, std::move(reason), dim, e};
    };

    Vec w = source.sample(0.0);
    double t = 0.0;
    try {
        for (std::size_t m = 0; m + 1 < grid.size(); ++m) {
            const double t_next = grid[m + 1];
            w = source.sample(grid[m]);
            std::size_t substeps = 0;
            while (t_next - t > tiny) {
                const TubeFrame frame = state_tube.frame(t);
                const Vec e = normalized_error(x, frame);
                const Vec u = control_input(x, frame, cfg);
                record(t, frame, u, w);
                double h = std::min(t_next - t, stable_substep(frame, e, state_tube, cfg, t,
                                                               t_next - t));
                if (++substeps >= opts.max_substeps)
                    h = t_next - t;
                if (t_next - (t + h) <= tiny)
                    h = t_next - t;
                x = rk4_step(dynamics, x, u, w, h);
                t = (h == t_next - t) ? t_next : t + h;
                for (std::size_t i = 0; i < n; ++i)
                    if (!std::isfinite(x[i]))
                        throw std::runtime_error("non-finite state");
            }
        }
        const TubeFrame frame = state_tube.frame(t);
        const Vec u = control_input(x, frame, cfg);
        record(t, frame, u, w);
        tr.completed = true;
    } catch (const TubeViolation& v) {
        tr.contained = false;
        fail(t, "state left the tube", v.dim(), v.normalized_error());
    } catch (const std::runtime_error& err) {
        fail(t, err.what());
    }

    tr.stayed = tr.completed && stay_checked && stay_ok;
    return tr;
}

}  // namespace stt
