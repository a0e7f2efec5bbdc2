#include "stt/avoidance.hpp"

#include "stt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stt {

std::array<double, 4> crossing_fractions(const Corridor& corridor, const Box& obstacle,
                                         std::size_t i)
{
    const ReachMargin& m = corridor.margin;
    const double w = corridor.band_width[i];
    const double lo = obstacle[i].lo();
    const double hi = obstacle[i].hi();
    return {m.crossing_fraction(i, lo), m.crossing_fraction(i, hi),
            m.crossing_fraction(i, lo - w), m.crossing_fraction(i, hi - w)};
}

std::optional<TimeWindow> dimension_window(const Corridor& corridor, const Box& obstacle,
                                           std::size_t i)
{
    const ReachMargin& m = corridor.margin;
    const double w = corridor.band_width[i];
    const double a = m.start(i);
    const double b = m.end(i);
    // Everything the band covers over [0, t_c].
    const Interval swept(std::min(a, b), std::max(a, b) + w);
    if (!intersects(swept, obstacle[i]))
        return std::nullopt;
    if (a == b)
        return TimeWindow{0.0, 1.0};
    const auto f = crossing_fractions(corridor, obstacle, i);
    return TimeWindow{*std::min_element(f.begin(), f.end()), *std::max_element(f.begin(), f.end())};
}

namespace {

struct WindowSet {
    std::vector<TimeWindow> per_dim;  // fractions
    TimeWindow combined;              // fractions
    bool empty = true;
};

WindowSet windows(const Corridor& corridor, const Box& obstacle)
{
    WindowSet ws;
    double entry = 0.0;
    double exit = 1.0;
    for (std::size_t i = 0; i < corridor.dims(); ++i) {
        const auto win = dimension_window(corridor, obstacle, i);
        if (!win)
            return ws;
        ws.per_dim.push_back(*win);
        entry = std::max(entry, win->lo);
        exit = std::min(exit, win->hi);
    }
    if (entry > exit)
        return ws;
    ws.combined = {entry, exit};
    ws.empty = false;
    return ws;
}

}  // namespace

std::optional<TimeWindow> intersection_interval(const Corridor& corridor, const Box& obstacle)
{
    const WindowSet ws = windows(corridor, obstacle);
    if (ws.empty)
        return std::nullopt;
    return TimeWindow{ws.combined.lo * corridor.t_c(), ws.combined.hi * corridor.t_c()};
}

namespace {

struct DimensionRule {
    std::size_t entry_dim = 0;  // i1
    std::size_t exit_dim = 0;   // i2
    std::size_t chosen = 0;
};

DimensionRule dimension_rule(const std::vector<TimeWindow>& per_dim)
{
    DimensionRule r;
    for (std::size_t i = 1; i < per_dim.size(); ++i) {
        if (per_dim[i].lo > per_dim[r.entry_dim].lo)
            r.entry_dim = i;
        if (per_dim[i].hi < per_dim[r.exit_dim].hi)
            r.exit_dim = i;
    }
    const auto spread = [&](std::size_t i) { return per_dim[i].hi - per_dim[i].lo; };
    const std::size_t a = std::min(r.entry_dim, r.exit_dim);
    const std::size_t b = std::max(r.entry_dim, r.exit_dim);
    r.chosen = spread(b) < spread(a) ? b : a;
    return r;
}

}  // namespace

std::size_t select_dimension(const Corridor& corridor, const Box& obstacle)
{
    const WindowSet ws = windows(corridor, obstacle);
    if (ws.empty)
        throw std::logic_error("select_dimension: obstacle is never met by the nominal band");
    return dimension_rule(ws.per_dim).chosen;
}

double detour_level(const Corridor& corridor, const Box& obstacle, double d_u, std::size_t k,
                    Side side)
{
    if (side == Side::Lower)
        return obstacle[k].hi() + d_u;
    return obstacle[k].lo() - corridor.band_width[k] - d_u;
}

namespace {

// Band with lower edge at `level` lies entirely on `side` of the obstacle.
bool on_side(const Corridor& c, const Box& obstacle, std::size_t k, double level, Side side)
{
    if (side == Side::Lower)
        return level > obstacle[k].hi();
    return level + c.band_width[k] < obstacle[k].lo();
}

}  // namespace

std::vector<Side> feasible_sides(const DetourQuery& q, std::size_t k)
{
    const Corridor& c = *q.corridor;
    const WindowSet ws = windows(c, *q.obstacle);
    if (ws.empty)
        return {};

    // Another dimension keeps the tube clear through the approach (it has
    // not entered yet) or through the return (it has already left).
    bool other_clear_on_approach = false;
    bool other_clear_on_return = false;
    for (std::size_t i = 0; i < ws.per_dim.size(); ++i) {
        if (i == k)
            continue;
        other_clear_on_approach |= ws.per_dim[i].lo >= ws.combined.lo;
        other_clear_on_return |= ws.per_dim[i].hi <= ws.combined.hi;
    }

    const double t_c = c.t_c();
    const double t1 = ws.combined.lo * t_c - q.delta;
    const double t2 = ws.combined.hi * t_c + q.delta;
    const double rho_t1 = c.margin.value(k, t1);
    const double rho_t2 = c.margin.value(k, t2);

    std::vector<Side> out;
    for (Side side : {Side::Lower, Side::Upper}) {
        const double psi = detour_level(c, *q.obstacle, q.d_u, k, side);
        const Interval held(psi, psi + c.band_width[k]);
        if (!(*q.workspace)[k].contains(held))
            continue;
        if (!other_clear_on_approach && !on_side(c, *q.obstacle, k, rho_t1, side))
            continue;
        if (!other_clear_on_return && !on_side(c, *q.obstacle, k, rho_t2, side))
            continue;
        out.push_back(side);
    }
    return out;
}

Side select_side(const DetourQuery& q, std::size_t k)
{
    const auto sides = feasible_sides(q, k);
    if (sides.empty())
        throw InfeasibleScenario("no feasible detour side in dimension " + std::to_string(k + 1));
    const auto window = intersection_interval(*q.corridor, *q.obstacle);
    const double rho_in = q.corridor->margin.value(k, window->lo);
    Side best = sides.front();
    double best_dist = std::abs(detour_level(*q.corridor, *q.obstacle, q.d_u, k, best) - rho_in);
    for (Side s : sides) {
        const double d = std::abs(detour_level(*q.corridor, *q.obstacle, q.d_u, k, s) - rho_in);
        if (d < best_dist) {
            best = s;
            best_dist = d;
        }
    }
    return best;
}

ObstaclePlan plan_obstacle(const RasTask& task, const Corridor& corridor,
                           const TubeParams& params, std::size_t j)
{
    ObstaclePlan plan;
    plan.obstacle = j;
    const Box& obstacle = task.unsafe[j];
    const WindowSet ws = windows(corridor, obstacle);
    if (ws.empty)
        return plan;

    const double t_c = corridor.t_c();
    plan.empty = false;
    plan.t_in = ws.combined.lo * t_c;
    plan.t_out = ws.combined.hi * t_c;
    plan.t1 = plan.t_in - params.delta;
    plan.t2 = plan.t_out + params.delta;

    const std::string name = "unsafe set " + std::to_string(j + 1);
    if (plan.t1 - params.delta_t <= 0.0)
        throw InfeasibleScenario(name + ": avoidance window starts before t = 0");
    if (plan.t2 + params.delta_t >= t_c)
        throw InfeasibleScenario(name + ": avoidance window does not end before t_c");

    // The three-step rule first, then the other rule candidate, then the rest.
    const DimensionRule rule = dimension_rule(ws.per_dim);
    std::vector<std::size_t> order{rule.chosen};
    const std::size_t other = rule.chosen == rule.entry_dim ? rule.exit_dim : rule.entry_dim;
    if (other != rule.chosen)
        order.push_back(other);
    for (std::size_t i = 0; i < corridor.dims(); ++i)
        if (std::find(order.begin(), order.end(), i) == order.end())
            order.push_back(i);

    const DetourQuery query{&corridor, &obstacle, &task.workspace, task.d_u[j], params.delta};
    for (std::size_t k : order) {
        if (feasible_sides(query, k).empty())
            continue;
        plan.dim = k;
        plan.side = select_side(query, k);
        plan.psi = detour_level(corridor, obstacle, task.d_u[j], k, plan.side);
        plan.rho_at_t1 = corridor.margin.value(k, plan.t1);
        plan.rho_at_t2 = corridor.margin.value(k, plan.t2);
        return plan;
    }
    throw InfeasibleScenario(name + ": no dimension admits a safe detour");
}

std::vector<ObstaclePlan> plan_all(const RasTask& task, const TubeParams& params)
{
    const Corridor corridor = make_corridor(task);
    std::vector<ObstaclePlan> plans;
    for (std::size_t j = 0; j < task.unsafe.size(); ++j)
        plans.push_back(plan_obstacle(task, corridor, params, j));
    return plans;
}

std::vector<ObstaclePlan> schedule(const RasTask& task, const TubeParams& params)
{
    // Temporal separation is checked on the windows alone so that it is
    // reported even when a detour would also be infeasible.
    const Corridor corridor = make_corridor(task);
    std::vector<std::pair<std::size_t, TimeWindow>> windows_by_obstacle;
    for (std::size_t j = 0; j < task.unsafe.size(); ++j)
        if (auto w = intersection_interval(corridor, task.unsafe[j]))
            windows_by_obstacle.emplace_back(j, *w);
    for (std::size_t a = 0; a < windows_by_obstacle.size(); ++a) {
        for (std::size_t b = a + 1; b < windows_by_obstacle.size(); ++b) {
            const auto& [ja, wa] = windows_by_obstacle[a];
            const auto& [jb, wb] = windows_by_obstacle[b];
            const double gap = std::max(wb.lo - wa.hi, wa.lo - wb.hi);
            if (!(gap > 2.0 * params.delta))
                throw InfeasibleScenario("unsafe sets " + std::to_string(ja + 1) + " and " +
                                         std::to_string(jb + 1) +
                                         " are not temporally separated by more than 2*delta");
        }
    }

    std::vector<ObstaclePlan> plans;
    for (const auto& [j, w] : windows_by_obstacle)
        plans.push_back(plan_obstacle(task, corridor, params, j));
    std::stable_sort(plans.begin(), plans.end(),
                     [](const ObstaclePlan& a, const ObstaclePlan& b) { return a.t_in < b.t_in; });
    return plans;
}

const ObstaclePlan* active_plan(const std::vector<ObstaclePlan>& sorted_plans, double t)
{
    for (const auto& p : sorted_plans)
        if (!p.empty && p.t2 > t)
            return &p;
    return nullptr;
}

}  // namespace stt
