// sttctl: command-line front end for tube synthesis, simulation and checks.
//
//   sttctl synthesize casestudy_omni.scenario --out out/
//   sttctl simulate   --scenario casestudy_omni.scenario --seed 7
//   sttctl verify     casestudy_omni.scenario --tube out/tube.csv
//   sttctl compare    casestudy_omni.scenario
//   sttctl simulate   --batch scenarios/ --out runs/

#include "stt/app.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

struct CommonOptions {
    std::string scenario;
    std::string positional;
    std::string out;
    std::string batch;
    std::string tube;
    std::uint64_t seed = 0;
    double dt = 0.0;
    double stay_horizon = 0.0;
};

void add_common(CLI::App* sub, CommonOptions& o)
{
    sub->add_option("scenario_file", o.positional, "Scenario file");
    sub->add_option("--scenario", o.scenario, "Scenario file");
    sub->add_option("--out", o.out, "Output directory (overrides run.output_dir)");
    sub->add_option("--seed", o.seed, "Disturbance seed (overrides the file)");
    sub->add_option("--dt", o.dt, "Simulation step in seconds (overrides run.dt)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--stay-horizon", o.stay_horizon, "Seconds simulated past t_c")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--batch", o.batch, "Run every *.scenario file in this directory");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spatiotemporal tube synthesis and closed-loop simulation"};
    app.require_subcommand(1);

    CommonOptions opts;
    CLI::App* synth = app.add_subcommand("synthesize", "Plan detours, build and verify the tube");
    CLI::App* sim = app.add_subcommand("simulate", "Run the closed loop inside the tube");
    CLI::App* verify = app.add_subcommand("verify", "Check a tube CSV against a scenario");
    CLI::App* compare = app.add_subcommand("compare", "Control effort: smooth tube vs baseline");
    for (CLI::App* sub : {synth, sim, verify, compare})
        add_common(sub, opts);
    verify->add_option("--tube", opts.tube, "Tube CSV written by synthesize")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : stt::kExitValidation;
    }

    stt::Invocation inv;
    inv.command = app.get_subcommands().front()->get_name();
    CLI::App* sub = app.get_subcommands().front();
    if (!opts.tube.empty())
        inv.tube_csv = opts.tube;
    if (sub->count("--seed"))
        inv.overrides.seed = opts.seed;
    if (sub->count("--dt"))
        inv.overrides.dt = opts.dt;
    if (sub->count("--stay-horizon"))
        inv.overrides.stay_horizon = opts.stay_horizon;
    if (!opts.out.empty())
        inv.overrides.out_dir = opts.out;

    if (!opts.batch.empty())
        return stt::run_batch(inv, opts.batch, std::cout, std::cerr);

    if (!opts.scenario.empty() && !opts.positional.empty() && opts.scenario != opts.positional) {
        std::cerr << "give the scenario either positionally or with --scenario, not both\n";
        return stt::kExitValidation;
    }
    inv.scenario = opts.scenario.empty() ? opts.positional : opts.scenario;
    if (inv.scenario.empty()) {
        std::cerr << "no scenario given (use --scenario <path> or --batch <dir>)\n";
        return stt::kExitValidation;
    }
    return stt::run_invocation(inv, std::cout, std::cerr);
}
