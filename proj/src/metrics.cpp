#include "stt/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stt {

namespace {

double norm(const Vec& u)
{
    double s = 0.0;
    for (double v : u)
        s += v * v;
    return std::sqrt(s);
}

}  // namespace

EffortReport control_effort(const Vec& t, const std::vector<Vec>& u)
{
    if (t.empty() || t.size() != u.size())
        throw std::invalid_argument("control effort needs a non-empty trace");
    EffortReport r;
    double prev = norm(u.front());
    r.peak = prev;
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double cur = norm(u[k]);
        const double h = t[k] - t[k - 1];
        r.energy += 0.5 * h * (prev * prev + cur * cur);
        r.l1 += 0.5 * h * (prev + cur);
        r.peak = std::max(r.peak, cur);
        prev = cur;
    }
    return r;
}

EffortReport control_effort(const SimTrace& trace, double horizon)
{
    if (trace.rows() == 0)
        throw std::invalid_argument("control effort needs a non-empty trace");
    std::size_t end = 0;
    while (end < trace.rows() && trace.t[end] <= horizon)
        ++end;
    const Vec t(trace.t.begin(), trace.t.begin() + static_cast<std::ptrdiff_t>(end));
    const std::vector<Vec> u(trace.u.begin(), trace.u.begin() + static_cast<std::ptrdiff_t>(end));
    return control_effort(t, u);
}

double effort_ratio(double a, double b)
{
    if (b == 0.0)
        return a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return a / b;
}

Tube baseline_tube(const TubeProblem& problem)
{
    const Corridor& corridor = problem.corridor;
    const TubeParams& params = problem.params;
    const std::size_t n = corridor.dims();
    const double t_c = corridor.t_c();
    const auto steps = static_cast<std::size_t>(std::ceil(t_c / params.dt - 1e-9));
    const double h = t_c / static_cast<double>(steps);
    const double scale = params.v / kBaselineSharpness;

    std::vector<Vec> lower(n, Vec(steps + 1)), upper(n, Vec(steps + 1)), rate(n, Vec(steps + 1));
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = k == steps ? t_c : h * static_cast<double>(k);
        for (std::size_t i = 0; i < n; ++i) {
            const double rho = corridor.margin.value(i, t);
            const double rho_rate = corridor.margin.rate(i, t);
            double g = rho;
            double g_rate = rho_rate;
            for (const auto& plan : problem.plans) {
                if (plan.empty || plan.dim != i)
                    continue;
                const double on = std::tanh((t - (plan.t1 + 0.5 * params.delta_t)) / scale);
                const double off = std::tanh((t - (plan.t2 - 0.5 * params.delta_t)) / scale);
                const double step = 0.5 * (on - off);
                const double step_rate = 0.5 * ((1.0 - on * on) - (1.0 - off * off)) / scale;
                g += (plan.psi - rho) * step;
                g_rate += -rho_rate * step + (plan.psi - rho) * step_rate;
            }
            lower[i][k] = g;
            upper[i][k] = g + corridor.band_width[i];
            rate[i][k] = g_rate;
        }
    }
    return Tube(h, std::move(lower), std::move(upper), std::move(rate));
}

}  // namespace stt
