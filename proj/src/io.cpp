#include "stt/io.hpp"

#include "stt/errors.hpp"
#include "stt/reach_tube.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace stt {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

std::string indexed(const std::string& path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

// Collects issues while walking the document; every accessor returns a
// usable fallback so one pass reports as many problems as possible.
class Reader {
public:
    std::vector<ConfigIssue> issues;

    void fail(const std::string& path, const std::string& msg) { issues.push_back({path, msg}); }

    const json* section(const json& parent, const std::string& key, const std::string& path,
                        bool required)
    {
        auto it = parent.find(key);
        if (it == parent.end()) {
            if (required)
                fail(join(path, key), "missing section");
            return nullptr;
        }
        if (!it->is_object()) {
            fail(join(path, key), "expected an object");
            return nullptr;
        }
        return &*it;
    }

    void allow(const json& obj, const std::string& path, std::initializer_list<const char*> keys)
    {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            const bool known = std::any_of(keys.begin(), keys.end(),
                                           [&](const char* k) { return it.key() == k; });
            if (!known)
                fail(join(path, it.key()), "unknown key");
        }
    }

    std::optional<double> number(const json& obj, const std::string& key, const std::string& path,
                                 bool required)
    {
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required)
                fail(join(path, key), "missing value");
            return std::nullopt;
        }
        if (!it->is_number()) {
            fail(join(path, key), "expected a number");
            return std::nullopt;
        }
        return it->get<double>();
    }

    std::optional<std::string> string(const json& obj, const std::string& key,
                                      const std::string& path)
    {
        auto it = obj.find(key);
        if (it == obj.end())
            return std::nullopt;
        if (!it->is_string()) {
            fail(join(path, key), "expected a string");
            return std::nullopt;
        }
        return it->get<std::string>();
    }

    std::optional<Vec> vector(const json& value, const std::string& path)
    {
        if (!value.is_array()) {
            fail(path, "expected an array of numbers");
            return std::nullopt;
        }
        Vec out;
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (!value[i].is_number()) {
                fail(indexed(path, i), "expected a number");
                return std::nullopt;
            }
            out.push_back(value[i].get<double>());
        }
        return out;
    }

    std::optional<Vec> vector(const json& obj, const std::string& key, const std::string& path,
                              bool required)
    {
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required)
                fail(join(path, key), "missing value");
            return std::nullopt;
        }
        return vector(*it, join(path, key));
    }

    std::optional<Interval> interval(const json& value, const std::string& path)
    {
        auto v = vector(value, path);
        if (!v)
            return std::nullopt;
        if (v->size() != 2) {
            fail(path, "expected [lo, hi]");
            return std::nullopt;
        }
        if (!std::isfinite((*v)[0]) || !std::isfinite((*v)[1]) || (*v)[0] > (*v)[1]) {
            fail(path, "expected finite lo <= hi");
            return std::nullopt;
        }
        return Interval((*v)[0], (*v)[1]);
    }

    std::optional<Box> box(const json& value, const std::string& path)
    {
        if (!value.is_array() || value.empty()) {
            fail(path, "expected a non-empty list of [lo, hi] intervals");
            return std::nullopt;
        }
        std::vector<Interval> sides;
        bool ok = true;
        for (std::size_t i = 0; i < value.size(); ++i) {
            auto iv = interval(value[i], indexed(path, i));
            if (iv)
                sides.push_back(*iv);
            else
                ok = false;
        }
        if (!ok)
            return std::nullopt;
        return Box(std::move(sides));
    }

    std::optional<Box> box(const json& obj, const std::string& key, const std::string& path,
                           bool required)
    {
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required)
                fail(join(path, key), "missing value");
            return std::nullopt;
        }
        return box(*it, join(path, key));
    }
};

// Hull of every set in the task, padded by 10% of its extent per dimension.
Box default_workspace(const RasTask& task)
{
    std::vector<Interval> sides;
    for (std::size_t i = 0; i < task.dims(); ++i) {
        double lo = std::min(task.initial[i].lo(), task.target[i].lo());
        double hi = std::max(task.initial[i].hi(), task.target[i].hi());
        for (const auto& u : task.unsafe) {
            if (u.size() != task.dims())
                continue;
            lo = std::min(lo, u[i].lo());
            hi = std::max(hi, u[i].hi());
        }
        const double pad = 0.1 * (hi - lo);
        sides.emplace_back(lo - pad, hi + pad);
    }
    return Box(std::move(sides));
}

void parse_task(Reader& r, const json& doc, RasTask& task)
{
    const std::string p = "task";
    const json* t = r.section(doc, "task", "", true);
    if (!t)
        return;
    r.allow(*t, p, {"initial", "target", "unsafe", "t_c", "x0", "eta", "d_s", "d_t", "d_u",
                    "constrained_dims", "workspace"});

    auto initial = r.box(*t, "initial", p, true);
    auto target = r.box(*t, "target", p, true);
    if (initial)
        task.initial = *initial;
    if (target)
        task.target = *target;

    if (auto it = t->find("unsafe"); it != t->end()) {
        if (!it->is_array()) {
            r.fail("task.unsafe", "expected a list of boxes");
        } else {
            for (std::size_t j = 0; j < it->size(); ++j)
                if (auto b = r.box((*it)[j], indexed("task.unsafe", j)))
                    task.unsafe.push_back(*b);
        }
    }

    task.t_c = r.number(*t, "t_c", p, true).value_or(0.0);
    task.x0 = r.vector(*t, "x0", p, true).value_or(Vec{});
    task.eta = r.vector(*t, "eta", p, true).value_or(Vec{});
    task.d_s = r.vector(*t, "d_s", p, true).value_or(Vec{});
    task.d_t = r.vector(*t, "d_t", p, true).value_or(Vec{});

    // d_u is either one margin for all unsafe sets or one per set.
    if (auto it = t->find("d_u"); it == t->end()) {
        r.fail("task.d_u", "missing value");
    } else if (it->is_number()) {
        task.d_u.assign(task.unsafe.size(), it->get<double>());
    } else if (auto v = r.vector(*it, "task.d_u")) {
        task.d_u = *v;
    }

    const std::size_t n = task.initial.size();
    if (auto it = t->find("constrained_dims"); it == t->end()) {
        for (std::size_t i = 0; i < n; ++i)
            task.state_dims.push_back(i);
    } else if (!it->is_array()) {
        r.fail("task.constrained_dims", "expected a list of 1-based state indices");
    } else {
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& e = (*it)[i];
            if (!e.is_number_integer() || e.get<long long>() < 1) {
                r.fail(indexed("task.constrained_dims", i), "expected a 1-based state index");
                continue;
            }
            task.state_dims.push_back(static_cast<std::size_t>(e.get<long long>() - 1));
        }
    }

    if (auto ws = r.box(*t, "workspace", p, false))
        task.workspace = *ws;
    else if (!t->contains("workspace") && n > 0 && task.target.size() == n)
        task.workspace = default_workspace(task);
}

void parse_tube(Reader& r, const json& doc, double t_c, TubeParams& params)
{
    params = TubeParams::defaults(t_c > 0.0 ? t_c : 1.0);
    const json* s = r.section(doc, "tube", "", false);
    if (!s)
        return;
    r.allow(*s, "tube", {"delta", "delta_t", "v", "eps_den", "dt", "track_tau"});
    auto delta = r.number(*s, "delta", "tube", false);
    auto delta_t = r.number(*s, "delta_t", "tube", false);
    auto v = r.number(*s, "v", "tube", false);
    // Derived defaults follow the explicitly given values.
    if (delta) {
        params.delta = *delta;
        params.delta_t = 0.5 * params.delta;
    }
    if (delta_t)
        params.delta_t = *delta_t;
    params.v = v.value_or(0.25 * params.delta_t);
    params.track_tau = r.number(*s, "track_tau", "tube", false).value_or(params.v);
    if (auto dt = r.number(*s, "dt", "tube", false)) {
        params.dt = *dt;
        params.eps_den = 0.5 * params.dt;
    }
    if (auto eps = r.number(*s, "eps_den", "tube", false))
        params.eps_den = *eps;
}

void parse_controller(Reader& r, const json& doc, ControllerConfig& cfg)
{
    const json* s = r.section(doc, "controller", "", false);
    if (!s)
        return;
    r.allow(*s, "controller", {"kappa", "gain_sign", "u_max"});
    cfg.kappa = r.number(*s, "kappa", "controller", false).value_or(cfg.kappa);
    if (auto it = s->find("gain_sign"); it != s->end()) {
        if (!it->is_number_integer())
            r.fail("controller.gain_sign", "expected +1 or -1");
        else
            cfg.gain_sign = it->get<int>();
    }
    if (s->contains("u_max") && !(*s)["u_max"].is_null())
        cfg.u_max = r.number(*s, "u_max", "controller", false);
}

void parse_plant(Reader& r, const json& doc, const RasTask& task, PlantConfig& plant)
{
    const json* s = r.section(doc, "plant", "", false);
    const json empty = json::object();
    const json& obj = s ? *s : empty;
    r.allow(obj, "plant", {"model", "state_dims", "initial_state", "free_bounds", "disturbance"});

    plant.model = r.string(obj, "model", "plant").value_or("omni");
    std::size_t n = plant.model == "omni" ? 3 : task.dims();
    if (auto it = obj.find("state_dims"); it != obj.end()) {
        if (!it->is_number_integer() || it->get<long long>() < 1)
            r.fail("plant.state_dims", "expected a positive integer");
        else
            n = static_cast<std::size_t>(it->get<long long>());
    }
    plant.state_dims = n;

    bool dims_ok = true;
    for (std::size_t s_idx : task.state_dims)
        if (s_idx >= n) {
            r.fail("task.constrained_dims", "index beyond the plant's " + std::to_string(n) +
                                                " states");
            dims_ok = false;
        }

    if (auto v = r.vector(obj, "initial_state", "plant", false)) {
        if (v->size() != n)
            r.fail("plant.initial_state", "expected " + std::to_string(n) + " values");
        plant.initial_state = *v;
    } else {
        plant.initial_state.assign(n, 0.0);
        if (dims_ok && task.x0.size() == task.state_dims.size()) {
            // Start at x0, or at the middle of the initial band when d_t is
            // tighter than d_s and the band no longer covers x0.
            Vec start = task.x0;
            try {
                validate_task(task);
                const Corridor c = make_corridor(task);
                for (std::size_t i = 0; i < start.size(); ++i)
                    if (!c.band(i, 0.0).contains_strictly(start[i]))
                        start[i] = c.band(i, 0.0).center();
            } catch (const ConfigError&) {
                // Reported by task validation.
            }
            for (std::size_t i = 0; i < task.state_dims.size(); ++i)
                plant.initial_state[task.state_dims[i]] = start[i];
        }
    }

    // Free dimensions: explicit [lo, hi] per free state in state order, or
    // x(0) +- pi/2.
    std::vector<std::size_t> free_dims;
    for (std::size_t i = 0; i < n; ++i)
        if (std::find(task.state_dims.begin(), task.state_dims.end(), i) == task.state_dims.end())
            free_dims.push_back(i);
    plant.free_bounds.assign(n, Interval::empty());
    if (auto it = obj.find("free_bounds"); it != obj.end()) {
        if (!it->is_array() || it->size() != free_dims.size()) {
            r.fail("plant.free_bounds",
                   "expected " + std::to_string(free_dims.size()) + " [lo, hi] intervals");
        } else {
            for (std::size_t k = 0; k < free_dims.size(); ++k)
                if (auto iv = r.interval((*it)[k], indexed("plant.free_bounds", k)))
                    plant.free_bounds[free_dims[k]] = *iv;
        }
    } else if (plant.initial_state.size() == n) {
        for (std::size_t i : free_dims)
            plant.free_bounds[i] = Interval(plant.initial_state[i] - std::numbers::pi / 2,
                                            plant.initial_state[i] + std::numbers::pi / 2);
    }

    if (const json* d = r.section(obj, "disturbance", "plant", false)) {
        const std::string p = "plant.disturbance";
        r.allow(*d, p, {"kind", "bound", "seed", "frequency", "phase"});
        if (auto kind = r.string(*d, "kind", p)) {
            try {
                plant.disturbance.kind = parse_disturbance_kind(*kind);
            } catch (const ConfigError& e) {
                for (const auto& issue : e.issues())
                    r.issues.push_back(issue);
            }
        }
        plant.disturbance.bound = r.number(*d, "bound", p, false).value_or(0.0);
        if (auto it = d->find("seed"); it != d->end()) {
            if (!it->is_number_unsigned())
                r.fail(join(p, "seed"), "expected a nonnegative integer");
            else
                plant.disturbance.seed = it->get<std::uint64_t>();
        }
        plant.disturbance.frequency =
            r.number(*d, "frequency", p, false).value_or(plant.disturbance.frequency);
        plant.disturbance.phase = r.number(*d, "phase", p, false).value_or(0.0);
    }
}

void parse_run(Reader& r, const json& doc, double t_c, RunConfig& run)
{
    run.stay_horizon = 0.25 * t_c;
    const json* s = r.section(doc, "run", "", false);
    if (!s)
        return;
    r.allow(*s, "run", {"dt", "stay_horizon", "output_dir"});
    run.dt = r.number(*s, "dt", "run", false).value_or(run.dt);
    run.stay_horizon = r.number(*s, "stay_horizon", "run", false).value_or(run.stay_horizon);
    run.output_dir = r.string(*s, "output_dir", "run").value_or(run.output_dir);
}

template <class F>
void collect(std::vector<ConfigIssue>& issues, F&& check)
{
    try {
        check();
    } catch (const ConfigError& e) {
        issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& fallback_name)
{
    json doc;
    try {
        doc = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("", "the document must be an object");

    Reader r;
    r.allow(doc, "", {"name", "task", "tube", "controller", "plant", "run"});
    Scenario sc;
    sc.name = r.string(doc, "name", "").value_or(fallback_name);
    parse_task(r, doc, sc.task);
    parse_tube(r, doc, sc.task.t_c, sc.tube);
    parse_controller(r, doc, sc.controller);
    parse_plant(r, doc, sc.task, sc.plant);
    parse_run(r, doc, sc.task.t_c, sc.run);

    // Structural problems make the semantic checks meaningless.
    if (!r.issues.empty())
        throw ConfigError(std::move(r.issues));

    std::vector<ConfigIssue> issues;
    collect(issues, [&] { validate_task(sc.task); });
    for (auto& issue : check_tube_params(sc.tube))
        issues.push_back(std::move(issue));
    collect(issues, [&] { validate_controller(sc.controller); });
    collect(issues, [&] { validate_disturbance(sc.plant.disturbance); });
    collect(issues, [&] {
        SimOptions opts;
        opts.dt = sc.run.dt;
        opts.stay_horizon = sc.run.stay_horizon;
        validate_sim_options(opts);
    });
    collect(issues, [&] { (void)make_dynamics(sc.plant.model, sc.plant.state_dims); });
    if (!issues.empty())
        throw ConfigError(std::move(issues));
    return sc;
}

Scenario parse_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot open scenario file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario_text(text.str(), path.stem().string());
}

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_tube_csv(std::ostream& os, const Tube& tube)
{
    os << 't';
    for (std::size_t i = 0; i < tube.dims(); ++i)
        os << ",g" << i + 1 << "L,g" << i + 1 << 'U';
    os << '\n';
    for (std::size_t k = 0; k < tube.samples(); ++k) {
        os << format_number(tube.time(k));
        for (std::size_t i = 0; i < tube.dims(); ++i)
            os << ',' << format_number(tube.lower(i, k)) << ',' << format_number(tube.upper(i, k));
        os << '\n';
    }
}

Tube read_tube_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line))
        throw ConfigError("tube_csv", "empty file");
    const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (columns < 3 || columns % 2 == 0 || line.rfind("t,", 0) != 0)
        throw ConfigError("tube_csv", "header must be t,g1L,g1U,...");
    const std::size_t n = (columns - 1) / 2;

    Vec times;
    std::vector<Vec> lower(n), upper(n);
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string cell;
        Vec values;
        while (std::getline(fields, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0')
                throw ConfigError("tube_csv", "row " + std::to_string(row) + ": bad number '" +
                                                  cell + "'");
            values.push_back(v);
        }
        if (values.size() != columns)
            throw ConfigError("tube_csv", "row " + std::to_string(row) + ": expected " +
                                              std::to_string(columns) + " fields");
        times.push_back(values[0]);
        for (std::size_t i = 0; i < n; ++i) {
            lower[i].push_back(values[1 + 2 * i]);
            upper[i].push_back(values[2 + 2 * i]);
        }
    }
    if (times.size() < 2)
        throw ConfigError("tube_csv", "at least two rows are required");
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    for (std::size_t k = 0; k < times.size(); ++k)
        if (std::abs(times[k] - dt * static_cast<double>(k)) > 1e-9 * (1.0 + times.back()))
            throw ConfigError("tube_csv", "time column must start at 0 and be uniform");
    return Tube(dt, std::move(lower), std::move(upper));
}

void write_trace_csv(std::ostream& os, const SimTrace& trace)
{
    const std::size_t n = trace.state_dims;
    os << 't';
    for (std::size_t i = 0; i < n; ++i)
        os << ",x" << i + 1;
    for (std::size_t i = 0; i < n; ++i)
        os << ",g" << i + 1 << "L,g" << i + 1 << 'U';
    for (std::size_t i = 0; i < n; ++i)
        os << ",u" << i + 1;
    os << ",active_obstacle\n";
    for (std::size_t k = 0; k < trace.rows(); ++k) {
        os << format_number(trace.t[k]);
        for (std::size_t i = 0; i < n; ++i)
            os << ',' << format_number(trace.x[k][i]);
        for (std::size_t i = 0; i < n; ++i)
            os << ',' << format_number(trace.lower[k][i]) << ',' << format_number(trace.upper[k][i]);
        for (std::size_t i = 0; i < n; ++i)
            os << ',' << format_number(trace.u[k][i]);
        os << ',' << trace.active[k] << '\n';
    }
}

}  // namespace stt
