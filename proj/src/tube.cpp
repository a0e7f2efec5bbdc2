#include "stt/tube.hpp"

#include "stt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stt {

double smoothstep(double t, double v)
{
    return 0.5 * std::tanh(t / v);
}

ActivationWeights activation_weights(const ObstaclePlan& p, const TubeParams& params, double t)
{
    const double v = params.v;
    const double dt = params.delta_t;
    ActivationWeights w;
    w.track = smoothstep(t, v) - smoothstep(t - p.t1 + dt, v) + smoothstep(t - p.t2 - dt, v) + 0.5;
    w.approach = smoothstep(t - p.t1 + dt, v) - smoothstep(t - p.t_in - dt, v);
    w.retreat = smoothstep(t - p.t_out + dt, v) - smoothstep(t - p.t2 - dt, v);
    return w;
}

double approach_target(const ObstaclePlan& p, double t)
{
    if (t >= p.t_in)
        return p.psi;
    if (t <= p.t1)
        return p.rho_at_t1;
    return (p.psi - p.rho_at_t1) * std::tanh((t - p.t1) / (p.t_in - t)) + p.rho_at_t1;
}

double return_target(const ObstaclePlan& p, double t)
{
    if (t >= p.t2)
        return p.rho_at_t2;
    if (t <= p.t_out)
        return p.psi;
    return (p.rho_at_t2 - p.psi) * std::tanh((t - p.t_out) / (p.t2 - t)) + p.psi;
}

double approach_shaper(const ObstaclePlan& p, const TubeParams& params, double t,
                       double gamma_now)
{
    return (approach_target(p, t) - gamma_now) / std::max(p.t_in - t, params.eps_den);
}

double return_shaper(const ObstaclePlan& p, const TubeParams& params, double t, double gamma_now)
{
    return (return_target(p, t) - gamma_now) / std::max(p.t2 - t, params.eps_den);
}

TubeProblem make_problem(const RasTask& task, const TubeParams& params)
{
    validate_task(task);
    if (auto issues = check_tube_params(params); !issues.empty())
        throw ConfigError(std::move(issues));
    TubeProblem problem;
    problem.corridor = make_corridor(task);
    problem.plans = schedule(task, params);
    problem.params = params;
    return problem;
}

Vec gamma_derivative(const TubeProblem& problem, std::span<const double> gamma, double t)
{
    const Corridor& c = problem.corridor;
    const TubeParams& params = problem.params;
    const std::size_t n = c.dims();
    Vec rate(n);
    for (std::size_t i = 0; i < n; ++i)
        rate[i] = c.margin.rate(i, t) + (c.margin.value(i, t) - gamma[i]) / params.track_tau;

    const ObstaclePlan* p = active_plan(problem.plans, t);
    if (!p)
        return rate;
    for (const auto& other : problem.plans)
        if (&other != p && other.t1 <= t && t <= other.t2 && p->t1 <= t)
            throw AssumptionViolation("avoidance windows of unsafe sets " +
                                      std::to_string(p->obstacle + 1) + " and " +
                                      std::to_string(other.obstacle + 1) + " overlap at t=" +
                                      std::to_string(t));

    const std::size_t k = p->dim;
    const ActivationWeights w = activation_weights(*p, params, t);
    rate[k] = w.track * rate[k] + w.approach * approach_shaper(*p, params, t, gamma[k]) +
              w.retreat * return_shaper(*p, params, t, gamma[k]);
    return rate;
}

Tube::Tube(double dt, std::vector<Vec> lower, std::vector<Vec> upper, std::vector<Vec> lower_rate)
    : dt_(dt), lower_(std::move(lower)), upper_(std::move(upper)), rate_(std::move(lower_rate))
{
    if (!(dt_ > 0.0))
        throw ConfigError("tube", "sample step must be positive");
    if (lower_.size() != upper_.size() || lower_.empty())
        throw ConfigError("tube", "lower and upper bounds must cover the same dimensions");
    const std::size_t n = lower_.front().size();
    if (n < 2)
        throw ConfigError("tube", "at least two samples are required");
    for (std::size_t i = 0; i < lower_.size(); ++i)
        if (lower_[i].size() != n || upper_[i].size() != n)
            throw ConfigError("tube", "ragged sample arrays");
    if (!rate_.empty() && rate_.size() != lower_.size())
        throw ConfigError("tube", "rate arrays must match the bounds");
}

double Tube::interpolate(const Vec& series, double t) const
{
    if (t <= 0.0)
        return series.front();
    const double pos = t / dt_;
    const auto last = series.size() - 1;
    if (pos >= static_cast<double>(last))
        return series.back();
    const auto k = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(k);
    return series[k] + frac * (series[k + 1] - series[k]);
}

TubeFrame Tube::frame(double t) const
{
    TubeFrame f;
    f.t = t;
    f.lower.reserve(dims());
    f.upper.reserve(dims());
    for (std::size_t i = 0; i < dims(); ++i) {
        f.lower.push_back(interpolate(lower_[i], t));
        f.upper.push_back(interpolate(upper_[i], t));
    }
    return f;
}

double Tube::lower_at(std::size_t i, double t) const
{
    return interpolate(lower_[i], t);
}

double Tube::lower_rate(std::size_t i, double t) const
{
    if (t < 0.0 || t > end_time())
        return 0.0;
    if (!rate_.empty())
        return interpolate(rate_[i], t);
    const auto last = samples() - 1;
    auto k = std::min(static_cast<std::size_t>(t / dt_), last - 1);
    return (lower_[i][k + 1] - lower_[i][k]) / dt_;
}

Box Tube::box(std::size_t k) const
{
    std::vector<Interval> dims_out;
    dims_out.reserve(dims());
    for (std::size_t i = 0; i < dims(); ++i)
        dims_out.emplace_back(std::min(lower_[i][k], upper_[i][k]),
                              std::max(lower_[i][k], upper_[i][k]));
    return Box(std::move(dims_out));
}

Tube evolve_tube(const TubeProblem& problem)
{
    const Corridor& c = problem.corridor;
    const std::size_t n = c.dims();
    const double t_c = c.t_c();
    const auto steps = static_cast<std::size_t>(
        std::max(1.0, std::ceil(t_c / problem.params.dt - 1e-9)));
    const double h = t_c / static_cast<double>(steps);

    std::vector<Vec> lower(n, Vec(steps + 1));
    std::vector<Vec> upper(n, Vec(steps + 1));
    std::vector<Vec> rate(n, Vec(steps + 1));

    Vec g(n), tmp(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = c.margin.start(i);

    auto store = [&](std::size_t k, const Vec& d) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(g[i]) || !std::isfinite(d[i]))
                throw SynthesisFailure(static_cast<double>(k) * h,
                                       "non-finite tube value in dimension " + std::to_string(i + 1));
            lower[i][k] = g[i];
            upper[i][k] = g[i] + c.band_width[i];
            rate[i][k] = d[i];
        }
    };

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * h;
        const Vec k1 = gamma_derivative(problem, g, t);
        store(k, k1);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = g[i] + 0.5 * h * k1[i];
        const Vec k2 = gamma_derivative(problem, tmp, t + 0.5 * h);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = g[i] + 0.5 * h * k2[i];
        const Vec k3 = gamma_derivative(problem, tmp, t + 0.5 * h);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = g[i] + h * k3[i];
        const Vec k4 = gamma_derivative(problem, tmp, t + h);
        for (std::size_t i = 0; i < n; ++i)
            g[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    store(steps, gamma_derivative(problem, g, t_c));
    return Tube(h, std::move(lower), std::move(upper), std::move(rate));
}

Tube embed_tube(const Tube& task_tube, std::size_t state_dims,
                const std::vector<std::size_t>& task_to_state,
                const std::vector<Interval>& free_bounds)
{
    const std::size_t m = task_tube.samples();
    std::vector<Vec> lower(state_dims), upper(state_dims), rate(state_dims);
    std::vector<bool> used(state_dims, false);
    for (std::size_t i = 0; i < task_to_state.size(); ++i) {
        const std::size_t s = task_to_state[i];
        if (s >= state_dims || used[s])
            throw ConfigError("task.constrained_dims", "invalid or repeated state index");
        used[s] = true;
        lower[s] = task_tube.lower_series(i);
        upper[s] = task_tube.upper_series(i);
        rate[s].resize(m);
        for (std::size_t k = 0; k < m; ++k)
            rate[s][k] = task_tube.lower_rate(i, task_tube.time(k));
    }
    if (free_bounds.size() != state_dims)
        throw ConfigError("plant.free_bounds", "expected one interval per state dimension");
    for (std::size_t s = 0; s < state_dims; ++s) {
        if (used[s])
            continue;
        lower[s].assign(m, free_bounds[s].lo());
        upper[s].assign(m, free_bounds[s].hi());
        rate[s].assign(m, 0.0);
    }
    return Tube(task_tube.dt(), std::move(lower), std::move(upper), std::move(rate));
}

Tube project_tube(const Tube& state_tube, const std::vector<std::size_t>& task_to_state)
{
    std::vector<Vec> lower, upper;
    for (std::size_t s : task_to_state) {
        if (s >= state_tube.dims())
            throw ConfigError("task.constrained_dims", "state index outside the tube");
        lower.push_back(state_tube.lower_series(s));
        upper.push_back(state_tube.upper_series(s));
    }
    return Tube(state_tube.dt(), std::move(lower), std::move(upper));
}

namespace {

void record(ConditionReport& r, bool ok, double margin, double t)
{
    r.worst_margin = std::min(r.worst_margin, margin);
    if (ok)
        return;
    r.pass = false;
    ++r.violations;
    if (r.violation_times.size() < kMaxViolationTimes)
        r.violation_times.push_back(t);
}

double containment_slack(const TubeFrame& f, const Box& set)
{
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i)
        slack = std::min({slack, f.lower[i] - set[i].lo(), set[i].hi() - f.upper[i]});
    return slack;
}

}  // namespace

VerificationReport verify_tube(const Tube& tube, const RasTask& task, double slack)
{
    if (tube.dims() != task.dims())
        throw ConfigError("tube", "dimension count differs from the task");
    constexpr double inf = std::numeric_limits<double>::infinity();
    VerificationReport r;
    r.initial.worst_margin = r.target.worst_margin = r.avoid.worst_margin =
        r.ordering.worst_margin = inf;

    const TubeFrame start = tube.frame(0.0);
    const double s0 = containment_slack(start, task.initial);
    record(r.initial, s0 >= -slack, s0, 0.0);
    const TubeFrame end = tube.frame(task.t_c);
    const double s1 = containment_slack(end, task.target);
    record(r.target, s1 >= -slack, s1, task.t_c);

    for (std::size_t k = 0; k < tube.samples(); ++k) {
        const double t = tube.time(k);
        if (t > task.t_c * (1.0 + 1e-12))
            break;
        double width = inf;
        for (std::size_t i = 0; i < tube.dims(); ++i)
            width = std::min(width, tube.upper(i, k) - tube.lower(i, k));
        record(r.ordering, width > 0.0, width, t);
        if (task.unsafe.empty())
            continue;
        const Box gamma = tube.box(k);
        double clearance = inf;
        for (const Box& u : task.unsafe)
            clearance = std::min(clearance, box_separation(gamma, u));
        record(r.avoid, clearance > 0.0, clearance, t);
    }
    return r;
}

std::size_t SmoothnessReport::flagged() const
{
    std::size_t total = 0;
    for (const auto& d : dims)
        total += d.flagged_times.size();
    return total;
}

std::size_t SmoothnessReport::flagged_between(double lo, double hi) const
{
    std::size_t total = 0;
    for (const auto& d : dims)
        for (double t : d.flagged_times)
            if (lo <= t && t <= hi)
                ++total;
    return total;
}

SmoothnessReport smoothness_check(const Tube& tube)
{
    SmoothnessReport report;
    const double dt = tube.dt();
    for (std::size_t i = 0; i < tube.dims(); ++i) {
        const Vec& g = tube.lower_series(i);
        DimensionSmoothness d;
        Vec rates(g.size() - 1);
        double scale = 0.0;
        for (std::size_t k = 0; k + 1 < g.size(); ++k) {
            const double jump = std::abs(g[k + 1] - g[k]);
            rates[k] = jump / dt;
            d.max_jump = std::max(d.max_jump, jump);
            scale = std::max(scale, std::abs(g[k]));
        }
        d.max_rate = d.max_jump / dt;
        Vec sorted = rates;
        const auto q = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(sorted.size()))) - 1;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(q), sorted.end());
        d.p99_rate = sorted[q];
        d.bound = 10.0 * d.p99_rate;
        // Rounding noise on an otherwise constant bound is not a jump.
        const double floor = 1e-12 * (1.0 + scale);
        for (std::size_t k = 0; k + 1 < g.size(); ++k) {
            const double jump = rates[k] * dt;
            if (jump > d.bound * dt && jump > floor)
                d.flagged_times.push_back(tube.time(k));
        }
        report.dims.push_back(std::move(d));
    }
    return report;
}

}  // namespace stt
