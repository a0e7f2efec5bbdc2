#include "stt/app.hpp"

#include "stt/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

namespace stt {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

void apply_overrides(Scenario& sc, const Overrides& ov)
{
    if (ov.seed)
        sc.plant.disturbance.seed = *ov.seed;
    if (ov.dt)
        sc.run.dt = *ov.dt;
    if (ov.stay_horizon)
        sc.run.stay_horizon = *ov.stay_horizon;
    if (ov.out_dir)
        sc.run.output_dir = ov.out_dir->string();
    SimOptions opts;
    opts.dt = sc.run.dt;
    opts.stay_horizon = sc.run.stay_horizon;
    try {
        validate_sim_options(opts);
    } catch (const ConfigError& e) {
        // Report under the flag names rather than the file keys.
        std::vector<ConfigIssue> issues;
        for (const auto& issue : e.issues())
            issues.push_back({issue.path == "run.dt" ? "--dt" : "--stay-horizon", issue.message});
        throw ConfigError(std::move(issues));
    }
}

Synthesis synthesize(const Scenario& sc)
{
    TubeProblem problem = make_problem(sc.task, sc.tube);
    Tube tube = evolve_tube(problem);
    Tube state_tube = embed_tube(tube, sc.plant.state_dims, sc.task.state_dims, sc.plant.free_bounds);
    ValidationReport assumptions = validate_assumptions(sc.task, sc.tube, problem.plans);
    VerificationReport verification = verify_tube(tube, sc.task);
    SmoothnessReport smoothness = smoothness_check(tube);
    return Synthesis{std::move(problem), std::move(tube),         std::move(state_tube),
                     std::move(assumptions), std::move(verification), std::move(smoothness)};
}

SimTrace run_closed_loop(const Scenario& sc, const Synthesis& syn, const Tube& task_tube)
{
    const Tube state_tube =
        embed_tube(task_tube, sc.plant.state_dims, sc.task.state_dims, sc.plant.free_bounds);
    const auto dynamics = make_dynamics(sc.plant.model, sc.plant.state_dims);
    SimOptions opts;
    opts.dt = sc.run.dt;
    opts.stay_horizon = sc.run.stay_horizon;
    return simulate(sc.task, state_tube, syn.problem.plans, sc.controller, *dynamics,
                    sc.plant.disturbance, sc.plant.initial_state, opts);
}

Comparison compare_efforts(const Scenario& sc, const Synthesis& syn)
{
    Comparison c;
    const Tube baseline = baseline_tube(syn.problem);
    c.smooth = run_closed_loop(sc, syn, syn.tube);
    c.baseline = run_closed_loop(sc, syn, baseline);
    c.smooth_effort = control_effort(c.smooth, sc.task.t_c);
    c.baseline_effort = control_effort(c.baseline, sc.task.t_c);
    c.baseline_smoothness = smoothness_check(baseline);
    c.baseline_verification = verify_tube(baseline, sc.task);
    return c;
}

namespace {

ordered_json to_json(const ConditionReport& r)
{
    ordered_json j;
    j["pass"] = r.pass;
    j["worst_margin"] = r.worst_margin;
    j["violations"] = r.violations;
    j["violation_times"] = r.violation_times;
    return j;
}

ordered_json to_json(const VerificationReport& r)
{
    ordered_json j;
    j["pass"] = r.pass();
    j["initial"] = to_json(r.initial);
    j["target"] = to_json(r.target);
    j["avoid"] = to_json(r.avoid);
    j["ordering"] = to_json(r.ordering);
    return j;
}

ordered_json to_json(const SmoothnessReport& r)
{
    ordered_json j;
    j["flagged"] = r.flagged();
    j["dims"] = ordered_json::array();
    for (const auto& d : r.dims) {
        ordered_json e;
        e["max_rate"] = d.max_rate;
        e["p99_rate"] = d.p99_rate;
        e["bound"] = d.bound;
        e["flagged"] = d.flagged_times.size();
        j["dims"].push_back(e);
    }
    return j;
}

ordered_json to_json(const EffortReport& r)
{
    ordered_json j;
    j["energy"] = r.energy;
    j["peak"] = r.peak;
    j["l1"] = r.l1;
    return j;
}

ordered_json to_json(const ObstaclePlan& p)
{
    ordered_json j;
    j["obstacle"] = p.obstacle + 1;
    j["t_in"] = p.t_in;
    j["t_out"] = p.t_out;
    j["t1"] = p.t1;
    j["t2"] = p.t2;
    j["dim"] = p.dim + 1;
    j["side"] = to_string(p.side);
    j["psi"] = p.psi;
    j["rho_at_t1"] = p.rho_at_t1;
    j["rho_at_t2"] = p.rho_at_t2;
    return j;
}

ordered_json to_json(const ValidationReport& r)
{
    auto separation = [](const std::vector<SeparationCheck>& checks) {
        ordered_json a = ordered_json::array();
        for (const auto& c : checks) {
            ordered_json e;
            e["obstacle"] = c.obstacle + 1;
            e["pass"] = c.pass;
            e["witness_dim"] = c.witness_dim ? ordered_json(*c.witness_dim + 1) : ordered_json();
            a.push_back(e);
        }
        return a;
    };
    auto plus_one = [](const std::vector<std::size_t>& v) {
        std::vector<std::size_t> out;
        for (auto i : v)
            out.push_back(i + 1);
        return out;
    };
    ordered_json j;
    j["pass"] = r.ok();
    j["initial_separation"] = separation(r.initial_separation);
    j["target_separation"] = separation(r.target_separation);
    j["temporal"] = ordered_json::array();
    for (const auto& c : r.temporal) {
        ordered_json e;
        e["first"] = c.first + 1;
        e["second"] = c.second + 1;
        e["gap"] = c.gap;
        e["required"] = c.required;
        e["pass"] = c.pass;
        j["temporal"].push_back(e);
    }
    j["initial_box_shrunk_dims"] = plus_one(r.initial_shrunk);
    j["target_box_shrunk_dims"] = plus_one(r.target_shrunk);
    return j;
}

ordered_json params_json(const Scenario& sc)
{
    ordered_json j;
    j["tube"] = {{"delta", sc.tube.delta},     {"delta_t", sc.tube.delta_t},
                 {"v", sc.tube.v},             {"eps_den", sc.tube.eps_den},
                 {"dt", sc.tube.dt},           {"track_tau", sc.tube.track_tau}};
    j["controller"] = {{"kappa", sc.controller.kappa},
                       {"gain_sign", sc.controller.gain_sign},
                       {"u_max", sc.controller.u_max ? ordered_json(*sc.controller.u_max)
                                                     : ordered_json()}};
    j["plant"] = {{"model", sc.plant.model},
                  {"initial_state", sc.plant.initial_state},
                  {"disturbance",
                   {{"kind", to_string(sc.plant.disturbance.kind)},
                    {"bound", sc.plant.disturbance.bound},
                    {"seed", sc.plant.disturbance.seed}}}};
    j["run"] = {{"dt", sc.run.dt}, {"stay_horizon", sc.run.stay_horizon}};
    return j;
}

ordered_json trace_json(const SimTrace& tr)
{
    ordered_json j;
    j["rows"] = tr.rows();
    j["completed"] = tr.completed;
    j["reached"] = tr.reached;
    j["safe"] = tr.safe;
    j["contained"] = tr.contained;
    j["stayed"] = tr.stayed;
    j["reach_time"] = tr.reach_time ? ordered_json(*tr.reach_time) : ordered_json();
    j["min_input_gain_eig"] = tr.min_gain_eig;
    j["max_disturbance"] = tr.max_disturbance;
    if (tr.failure) {
        ordered_json f;
        f["time"] = tr.failure->time;
        f["reason"] = tr.failure->reason;
        f["dim"] = tr.failure->dim ? ordered_json(*tr.failure->dim + 1) : ordered_json();
        f["normalized_error"] =
            tr.failure->normalized_error ? ordered_json(*tr.failure->normalized_error)
                                         : ordered_json();
        j["failure"] = f;
    } else {
        j["failure"] = nullptr;
    }
    return j;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path& path, const ordered_json& j)
{
    write_text(path, j.dump(2) + "\n");
}

template <class Writer>
void write_csv(const fs::path& path, Writer&& writer)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    writer(out);
}

const char* yes_no(bool b)
{
    return b ? "yes" : "no";
}

}  // namespace

int command_synthesize(const Scenario& sc, const fs::path& out_dir, std::ostream& log)
{
    const Synthesis syn = synthesize(sc);
    fs::create_directories(out_dir);
    write_csv(out_dir / "tube.csv", [&](std::ostream& os) { write_tube_csv(os, syn.tube); });

    ordered_json report;
    report["scenario"] = sc.name;
    report["parameters"] = params_json(sc);
    report["plans"] = ordered_json::array();
    for (const auto& p : syn.problem.plans)
        report["plans"].push_back(to_json(p));
    report["assumptions"] = to_json(syn.assumptions);
    report["verification"] = to_json(syn.verification);
    report["smoothness"] = to_json(syn.smoothness);
    write_json(out_dir / "synthesis.json", report);

    log << sc.name << ": " << syn.problem.plans.size() << " detour(s), tube "
        << (syn.verification.pass() ? "verified" : "FAILED verification") << ", assumptions "
        << (syn.assumptions.ok() ? "hold" : "VIOLATED") << ", " << syn.smoothness.flagged()
        << " flagged jump(s)\n";
    return syn.verification.pass() && syn.assumptions.ok() ? kExitOk : kExitGuarantee;
}

int command_simulate(const Scenario& sc, const fs::path& out_dir, std::ostream& log)
{
    const Synthesis syn = synthesize(sc);
    const SimTrace tr = run_closed_loop(sc, syn, syn.tube);
    const EffortReport effort = control_effort(tr, sc.task.t_c);
    fs::create_directories(out_dir);
    write_csv(out_dir / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, tr); });

    ordered_json side;
    side["scenario"] = sc.name;
    side["seed"] = sc.plant.disturbance.seed;
    side["parameters"] = params_json(sc);
    side["tube_verified"] = syn.verification.pass();
    side["trace"] = trace_json(tr);
    side["effort"] = to_json(effort);
    write_json(out_dir / "trace.json", side);

    ordered_json eff;
    eff["scenario"] = sc.name;
    eff["seed"] = sc.plant.disturbance.seed;
    eff["effort"] = to_json(effort);
    write_json(out_dir / "effort.json", eff);

    log << sc.name << " seed " << sc.plant.disturbance.seed << ": reached " << yes_no(tr.reached)
        << ", safe " << yes_no(tr.safe) << ", contained " << yes_no(tr.contained) << ", stayed "
        << yes_no(tr.stayed) << ", energy " << format_number(effort.energy) << '\n';
    if (tr.failure)
        log << "  failure at t = " << format_number(tr.failure->time) << ": "
            << tr.failure->reason << '\n';
    return syn.verification.pass() && tr.ok() ? kExitOk : kExitGuarantee;
}

int command_verify(const Scenario& sc, const fs::path& tube_csv, const fs::path& out_dir,
                   std::ostream& log)
{
    std::ifstream in(tube_csv);
    if (!in)
        throw ConfigError("--tube", "cannot open " + tube_csv.string());
    const Tube tube = read_tube_csv(in);
    if (tube.dims() != sc.task.dims())
        throw ConfigError("tube_csv", "tube has " + std::to_string(tube.dims()) +
                                          " dimensions, task has " +
                                          std::to_string(sc.task.dims()));
    const VerificationReport report = verify_tube(tube, sc.task);
    const SmoothnessReport smooth = smoothness_check(tube);

    ordered_json j;
    j["scenario"] = sc.name;
    j["samples"] = tube.samples();
    j["verification"] = to_json(report);
    j["smoothness"] = to_json(smooth);
    fs::create_directories(out_dir);
    write_json(out_dir / "verify.json", j);

    const auto line = [&](const char* name, const ConditionReport& c) {
        log << "  " << name << ": " << (c.pass ? "pass" : "FAIL") << " (worst margin "
            << format_number(c.worst_margin) << ", " << c.violations << " violation(s))\n";
    };
    log << sc.name << ": tube " << (report.pass() ? "verified" : "FAILED verification") << '\n';
    line("(i) initial containment", report.initial);
    line("(ii) target containment", report.target);
    line("(iii) obstacle avoidance", report.avoid);
    line("(iv) bound ordering", report.ordering);
    return report.pass() ? kExitOk : kExitGuarantee;
}

int command_compare(const Scenario& sc, const fs::path& out_dir, std::ostream& log)
{
    const Synthesis syn = synthesize(sc);
    const Comparison c = compare_efforts(sc, syn);

    ordered_json j;
    j["scenario"] = sc.name;
    j["seed"] = sc.plant.disturbance.seed;
    j["smooth"] = to_json(c.smooth_effort);
    j["baseline"] = to_json(c.baseline_effort);
    j["baseline_kind"] = "reconstructed";
    j["ratio"] = {{"energy", effort_ratio(c.smooth_effort.energy, c.baseline_effort.energy)},
                  {"peak", effort_ratio(c.smooth_effort.peak, c.baseline_effort.peak)},
                  {"l1", effort_ratio(c.smooth_effort.l1, c.baseline_effort.l1)}};
    j["smooth_run"] = trace_json(c.smooth);
    j["baseline_run"] = trace_json(c.baseline);
    j["smooth_flagged_jumps"] = syn.smoothness.flagged();
    j["baseline_flagged_jumps"] = c.baseline_smoothness.flagged();
    j["baseline_tube_verified"] = c.baseline_verification.pass();
    j["smooth_below_baseline"] = c.ordered();
    fs::create_directories(out_dir);
    write_json(out_dir / "compare.json", j);

    log << sc.name << " seed " << sc.plant.disturbance.seed << ": energy "
        << format_number(c.smooth_effort.energy) << " vs " << format_number(c.baseline_effort.energy)
        << " (reconstructed baseline), peak " << format_number(c.smooth_effort.peak) << " vs "
        << format_number(c.baseline_effort.peak) << '\n';
    return c.ordered() && c.smooth.ok() ? kExitOk : kExitGuarantee;
}

int run_invocation(const Invocation& inv, std::ostream& log, std::ostream& err)
{
    try {
        Scenario sc = parse_scenario(inv.scenario);
        apply_overrides(sc, inv.overrides);
        const fs::path out = sc.run.output_dir;
        if (inv.command == "synthesize")
            return command_synthesize(sc, out, log);
        if (inv.command == "simulate")
            return command_simulate(sc, out, log);
        if (inv.command == "compare")
            return command_compare(sc, out, log);
        if (inv.command == "verify") {
            if (!inv.tube_csv)
                throw ConfigError("--tube", "verify needs a tube CSV");
            return command_verify(sc, *inv.tube_csv, out, log);
        }
        throw ConfigError("command", "unknown command '" + inv.command + "'");
    } catch (const ConfigError& e) {
        err << "validation error in " << inv.scenario.string() << ":\n";
        for (const auto& issue : e.issues())
            err << "  " << (issue.path.empty() ? "<document>" : issue.path) << ": "
                << issue.message << '\n';
        return kExitValidation;
    } catch (const InfeasibleScenario& e) {
        err << "infeasible scenario " << inv.scenario.string() << ": " << e.what() << '\n';
        return kExitValidation;
    } catch (const AssumptionViolation& e) {
        err << "assumption violated in " << inv.scenario.string() << ": " << e.what() << '\n';
        return kExitValidation;
    } catch (const SynthesisFailure& e) {
        err << "tube synthesis failed at t = " << format_number(e.time()) << ": " << e.what()
            << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int run_batch(const Invocation& inv, const fs::path& dir, std::ostream& log, std::ostream& err)
{
    if (!fs::is_directory(dir)) {
        err << "batch directory not found: " << dir.string() << '\n';
        return kExitValidation;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".scenario")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        err << "no .scenario files in " << dir.string() << '\n';
        return kExitValidation;
    }

    const fs::path root = inv.overrides.out_dir.value_or("out");
    struct Result {
        int code;
        std::string log;
        std::string err;
    };
    std::vector<std::future<Result>> jobs;
    for (const auto& file : files) {
        Invocation one = inv;
        one.scenario = file;
        one.overrides.out_dir = root / file.stem();
        jobs.push_back(std::async(std::launch::async, [one] {
            std::ostringstream l, e;
            const int code = run_invocation(one, l, e);
            return Result{code, l.str(), e.str()};
        }));
    }
    int worst = kExitOk;
    for (auto& job : jobs) {
        const Result r = job.get();
        log << r.log;
        err << r.err;
        worst = std::max(worst, r.code);
    }
    return worst;
}

}  // namespace stt
