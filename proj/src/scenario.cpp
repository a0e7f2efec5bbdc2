#include "stt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stt {

const char* to_string(Side side)
{
    return side == Side::Lower ? "L" : "U";
}

TubeParams TubeParams::defaults(double t_c)
{
    TubeParams p;
    p.delta = 0.05 * t_c;
    p.delta_t = 0.5 * p.delta;
    p.v = 0.25 * p.delta_t;
    p.dt = t_c / 20000.0;
    p.eps_den = 0.5 * p.dt;
    p.track_tau = p.v;
    return p;
}

namespace {

std::string idx(const std::string& base, std::size_t i)
{
    return base + "[" + std::to_string(i) + "]";
}

bool all_finite(const Vec& v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void validate_task(const RasTask& task)
{
    std::vector<ConfigIssue> issues;
    const std::size_t n = task.dims();

    if (n == 0)
        issues.push_back({"task.initial", "task must have at least one dimension"});
    if (task.target.size() != n)
        issues.push_back({"task.target", "dimension count differs from task.initial"});
    for (std::size_t j = 0; j < task.unsafe.size(); ++j)
        if (task.unsafe[j].size() != n)
            issues.push_back({idx("task.unsafe", j), "dimension count differs from task.initial"});
    if (task.workspace.size() != n)
        issues.push_back({"task.workspace", "dimension count differs from task.initial"});
    if (task.x0.size() != n || !all_finite(task.x0))
        issues.push_back({"task.x0", "expected " + std::to_string(n) + " finite values"});
    if (task.eta.size() != n || !all_finite(task.eta))
        issues.push_back({"task.eta", "expected " + std::to_string(n) + " finite values"});
    if (task.d_s.size() != n)
        issues.push_back({"task.d_s", "expected " + std::to_string(n) + " values"});
    if (task.d_t.size() != n)
        issues.push_back({"task.d_t", "expected " + std::to_string(n) + " values"});
    if (task.d_u.size() != task.unsafe.size())
        issues.push_back({"task.d_u", "expected one margin per unsafe set"});
    if (!task.state_dims.empty() && task.state_dims.size() != n)
        issues.push_back({"task.constrained_dims", "expected one state index per task dimension"});
    if (!(task.t_c > 0.0) || !std::isfinite(task.t_c))
        issues.push_back({"task.t_c", "prescribed time must be positive"});
    // Element-wise checks below index every vector, so stop here on any shape mismatch.
    const bool shape_ok = std::none_of(issues.begin(), issues.end(),
                                       [](const ConfigIssue& i) { return i.path != "task.t_c"; });
    if (!shape_ok)
        throw ConfigError(std::move(issues));

    for (std::size_t i = 0; i < n; ++i) {
        if (!(task.d_s[i] > 0.0))
            issues.push_back({idx("task.d_s", i), "must be positive"});
        if (!(task.d_t[i] > 0.0))
            issues.push_back({idx("task.d_t", i), "must be positive"});
    }
    for (std::size_t j = 0; j < task.d_u.size(); ++j)
        if (!(task.d_u[j] > 0.0))
            issues.push_back({idx("task.d_u", j), "must be positive"});
    if (!task.initial.contains_point_strictly(task.x0))
        issues.push_back({"task.x0", "initial state must lie in the interior of the initial set"});
    if (!task.target.contains_point_strictly(task.eta))
        issues.push_back({"task.eta", "reference point must lie in the interior of the target set"});
    for (std::size_t j = 0; j < task.unsafe.size(); ++j) {
        if (!box_disjoint(task.initial, task.unsafe[j]))
            issues.push_back({idx("task.unsafe", j), "intersects the initial set"});
        if (!box_disjoint(task.target, task.unsafe[j]))
            issues.push_back({idx("task.unsafe", j), "intersects the target set"});
    }
    if (!issues.empty())
        throw ConfigError(std::move(issues));
}

std::vector<ConfigIssue> check_tube_params(const TubeParams& p)
{
    std::vector<ConfigIssue> issues;
    if (!(p.delta > 0.0))
        issues.push_back({"tube.delta", "must be positive"});
    if (!(p.delta_t > 0.0) || !(p.delta_t < p.delta))
        issues.push_back({"tube.delta_t", "must satisfy 0 < delta_t < delta"});
    if (!(p.v > 0.0))
        issues.push_back({"tube.v", "must be positive"});
    if (!(p.eps_den > 0.0))
        issues.push_back({"tube.eps_den", "must be positive"});
    if (!(p.dt > 0.0))
        issues.push_back({"tube.dt", "must be positive"});
    if (!(p.track_tau > 0.0))
        issues.push_back({"tube.track_tau", "must be positive"});
    return issues;
}

namespace {

CenteredBox centered_box(const Box& outer, const Vec& center, const Vec& half,
                         const std::string& center_path)
{
    CenteredBox out;
    std::vector<Interval> dims;
    for (std::size_t i = 0; i < outer.size(); ++i) {
        const double c = center[i];
        if (!outer[i].contains_strictly(c))
            throw ConfigError(center_path, "dimension " + std::to_string(i + 1) +
                                               " is not strictly inside its enclosing set");
        const double fit = std::min(c - outer[i].lo(), outer[i].hi() - c);
        double d = half[i];
        if (d > fit) {
            d = fit;
            out.shrunk.push_back(i);
        }
        out.half_extent.push_back(d);
        dims.emplace_back(c - d, c + d);
    }
    out.box = Box(std::move(dims));
    return out;
}

}  // namespace

CenteredBox build_initial_box(const RasTask& task)
{
    return centered_box(task.initial, task.x0, task.d_s, "task.x0");
}

CenteredBox build_target_box(const RasTask& task)
{
    return centered_box(task.target, task.eta, task.d_t, "task.eta");
}

bool ValidationReport::separation_ok() const
{
    auto pass = [](const SeparationCheck& c) { return c.pass; };
    return std::all_of(initial_separation.begin(), initial_separation.end(), pass) &&
           std::all_of(target_separation.begin(), target_separation.end(), pass);
}

bool ValidationReport::temporal_ok() const
{
    return std::all_of(temporal.begin(), temporal.end(),
                       [](const TemporalCheck& c) { return c.pass; });
}

ValidationReport validate_assumptions(const RasTask& task, const TubeParams& params,
                                      const std::vector<ObstaclePlan>& plans)
{
    ValidationReport report;
    const CenteredBox s_hat = build_initial_box(task);
    const CenteredBox t_hat = build_target_box(task);
    report.initial_shrunk = s_hat.shrunk;
    report.target_shrunk = t_hat.shrunk;

    auto separation = [&](const Box& box, std::size_t j) {
        SeparationCheck c;
        c.obstacle = j;
        for (std::size_t i = 0; i < box.size(); ++i) {
            if (!intersects(box[i], task.unsafe[j][i])) {
                c.pass = true;
                c.witness_dim = i;
                break;
            }
        }
        return c;
    };
    for (std::size_t j = 0; j < task.unsafe.size(); ++j) {
        report.initial_separation.push_back(separation(s_hat.box, j));
        report.target_separation.push_back(separation(t_hat.box, j));
    }

    for (std::size_t a = 0; a < plans.size(); ++a) {
        if (plans[a].empty)
            continue;
        for (std::size_t b = a + 1; b < plans.size(); ++b) {
            if (plans[b].empty)
                continue;
            TemporalCheck c;
            c.first = plans[a].obstacle;
            c.second = plans[b].obstacle;
            // Signed gap between the windows; equals the smaller absolute
            // endpoint difference when they are disjoint, negative on overlap.
            c.gap = std::max(plans[b].t_in - plans[a].t_out, plans[a].t_in - plans[b].t_out);
            c.required = 2.0 * params.delta;
            c.pass = c.gap > c.required;
            report.temporal.push_back(c);
        }
    }
    return report;
}

}  // namespace stt
