#include "support.hpp"

#include "stt/errors.hpp"

#include <algorithm>
#include <cmath>

namespace stt::testing {

std::string scenario_path(const std::string& file)
{
    return std::string(STT_SCENARIO_DIR) + "/" + file;
}

Scenario case_study()
{
    return parse_scenario(scenario_path("casestudy_omni.scenario"));
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Start and target sets, their centres and margins; no obstacles yet.
RasTask random_endpoints(std::mt19937_64& rng, std::size_t n)
{
    RasTask task;
    task.t_c = uniform(rng, 10.0, 100.0);
    std::vector<Interval> s, t;
    for (std::size_t i = 0; i < n; ++i) {
        const double s_lo = uniform(rng, -1.0, 1.0);
        const double s_ext = uniform(rng, 0.5, 1.5);
        const double sign = std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? -1.0 : 1.0;
        const double t_lo = s_lo + sign * uniform(rng, 3.0, 12.0);
        const double t_ext = uniform(rng, 0.5, 1.5);
        s.emplace_back(s_lo, s_lo + s_ext);
        t.emplace_back(t_lo, t_lo + t_ext);
        task.x0.push_back(s_lo + s_ext * uniform(rng, 0.4, 0.6));
        task.eta.push_back(t_lo + t_ext * uniform(rng, 0.4, 0.6));
        task.d_s.push_back(s_ext * uniform(rng, 0.2, 0.45));
        task.d_t.push_back(t_ext * uniform(rng, 0.2, 0.45));
        task.state_dims.push_back(i);
    }
    task.initial = Box(std::move(s));
    task.target = Box(std::move(t));
    return task;
}

Box workspace_around(const RasTask& task, double pad)
{
    std::vector<Interval> sides;
    for (std::size_t i = 0; i < task.dims(); ++i) {
        double lo = std::min(task.initial[i].lo(), task.target[i].lo());
        double hi = std::max(task.initial[i].hi(), task.target[i].hi());
        for (const auto& u : task.unsafe) {
            lo = std::min(lo, u[i].lo());
            hi = std::max(hi, u[i].hi());
        }
        sides.emplace_back(lo - pad, hi + pad);
    }
    return Box(std::move(sides));
}

// Box around the point the band centre passes at spatial fraction f.
Box box_on_path(std::mt19937_64& rng, const Corridor& c, double f, double jitter,
                double min_half, double max_half)
{
    std::vector<Interval> sides;
    for (std::size_t i = 0; i < c.dims(); ++i) {
        const double w = c.band_width[i];
        const double a = c.margin.start(i);
        const double b = c.margin.end(i);
        const double centre = a + f * (b - a) + 0.5 * w + uniform(rng, -jitter, jitter) * w;
        const double half = uniform(rng, min_half, max_half);
        sides.emplace_back(centre - half, centre + half);
    }
    return Box(std::move(sides));
}

std::optional<RandomScenario> try_scenario(std::mt19937_64& rng)
{
    const std::size_t n = std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? 2 : 3;
    RasTask task = random_endpoints(rng, n);
    Corridor corridor;
    try {
        corridor = make_corridor(task);
    } catch (const ConfigError&) {
        return std::nullopt;
    }

    const int m = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<double> fractions;
    for (int j = 0; j < m; ++j)
        fractions.push_back(uniform(rng, 0.15, 0.85));
    std::sort(fractions.begin(), fractions.end());
    for (double f : fractions) {
        task.unsafe.push_back(box_on_path(rng, corridor, f, 0.3, 0.15, 0.9));
        task.d_u.push_back(uniform(rng, 0.02, 0.1));
    }
    task.workspace = workspace_around(task, 4.0);
    try {
        validate_task(task);
    } catch (const ConfigError&) {
        return std::nullopt;
    }

    // The window margin shrinks when windows sit close together, but never
    // below 0.4% of t_c (the grid would get too fine).
    std::vector<TimeWindow> wins;
    for (const auto& u : task.unsafe)
        if (auto w = intersection_interval(corridor, u))
            wins.push_back(*w);
    if (wins.empty())
        return std::nullopt;
    std::sort(wins.begin(), wins.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
    double gap = task.t_c;
    for (std::size_t j = 1; j < wins.size(); ++j)
        gap = std::min(gap, wins[j].lo - wins[j - 1].hi);
    if (!(gap > 0.0))
        return std::nullopt;

    TubeParams p = TubeParams::defaults(task.t_c);
    p.delta = std::min(p.delta, 0.3 * gap);
    if (p.delta < 0.004 * task.t_c)
        return std::nullopt;
    p.delta_t = 0.5 * p.delta;
    p.v = 0.25 * p.delta_t;
    p.track_tau = p.v;
    p.dt = std::min(task.t_c / 20000.0, p.delta / 1000.0);
    p.eps_den = 0.5 * p.dt;

    try {
        const TubeProblem problem = make_problem(task, p);
        if (!validate_assumptions(task, p, problem.plans).ok())
            return std::nullopt;
    } catch (const InfeasibleScenario&) {
        return std::nullopt;
    } catch (const AssumptionViolation&) {
        return std::nullopt;
    } catch (const ConfigError&) {
        return std::nullopt;
    }
    return RandomScenario{std::move(task), p, 0};
}

}  // namespace

RandomScenario random_scenario(std::mt19937_64& rng)
{
    for (std::uint64_t attempt = 1;; ++attempt) {
        if (auto s = try_scenario(rng)) {
            s->draw = attempt;
            return *s;
        }
    }
}

RandomPair random_pair(std::mt19937_64& rng)
{
    for (;;) {
        const std::size_t n = std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? 2 : 3;
        RasTask task = random_endpoints(rng, n);
        try {
            Corridor c = make_corridor(task);
            Box u = box_on_path(rng, c, uniform(rng, -0.1, 1.1), 3.0, 0.05, 1.0);
            return RandomPair{std::move(c), std::move(u)};
        } catch (const ConfigError&) {
        }
    }
}

Vec integrate_margin(double start, double end, double t_c, double t_end, std::size_t steps)
{
    const double d = end - start;
    auto rate = [&](double t) {
        const double s = t_c - t;
        const double ch = std::cosh(t / s);
        return t_c * d / (s * s) / (ch * ch);
    };
    const double h = t_end / static_cast<double>(steps);
    Vec out(steps + 1);
    double rho = start;
    out[0] = rho;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = h * static_cast<double>(k);
        // The right-hand side does not depend on rho, so RK4 reduces to Simpson's rule.
        const double k1 = rate(t);
        const double k2 = rate(t + 0.5 * h);
        const double k4 = rate(t + h);
        rho += h / 6.0 * (k1 + 4.0 * k2 + k4);
        out[k + 1] = rho;
    }
    return out;
}

std::optional<TimeWindow> grid_window(const Corridor& corridor, const Box& obstacle,
                                      std::size_t samples)
{
    std::optional<TimeWindow> win;
    const double t_c = corridor.t_c();
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = t_c * static_cast<double>(k) / static_cast<double>(samples - 1);
        bool hit = true;
        for (std::size_t i = 0; i < corridor.dims() && hit; ++i) {
            const double lo = corridor.margin.value(i, t);
            const double hi = lo + corridor.band_width[i];
            hit = lo <= obstacle[i].hi() && obstacle[i].lo() <= hi;
        }
        if (!hit)
            continue;
        if (!win)
            win = TimeWindow{t, t};
        win->hi = t;
    }
    return win;
}

std::vector<DetourErrors> detour_errors(const TubeProblem& problem, const Tube& tube)
{
    std::vector<DetourErrors> out;
    const auto& plans = problem.plans;
    const double t_c = problem.corridor.t_c();
    for (std::size_t j = 0; j < plans.size(); ++j) {
        const ObstaclePlan& p = plans[j];
        const std::size_t k = p.dim;
        DetourErrors e;
        e.tolerance = 1e-3 * (std::abs(p.psi - p.rho_at_t1) + 1.0);
        e.at_entry = std::abs(tube.lower_at(k, p.t_in) - p.psi);
        const double ret_from = p.t2 + problem.params.delta_t;
        e.returned = std::abs(tube.lower_at(k, ret_from) -
                              problem.corridor.margin.value(k, ret_from));
        const double ret_to =
            j + 1 < plans.size() ? plans[j + 1].t1 - problem.params.delta_t : t_c;
        for (std::size_t s = 0; s < tube.samples(); ++s) {
            const double t = tube.time(s);
            if (t >= p.t_in && t <= p.t_out)
                e.held = std::max(e.held, std::abs(tube.lower(k, s) - p.psi));
            if (t >= ret_from && t <= ret_to)
                e.settled = std::max(
                    e.settled, std::abs(tube.lower(k, s) - problem.corridor.margin.value(k, t)));
        }
        out.push_back(e);
    }
    return out;
}

}  // namespace stt::testing
