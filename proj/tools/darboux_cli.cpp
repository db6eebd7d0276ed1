#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "darboux/commands.hpp"
#include "darboux/config.hpp"
#include "darboux/errors.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::size_t> n;
    std::optional<double> dt;
    std::optional<std::size_t> steps;
    std::optional<double> tolerance_scale;
    std::optional<std::string> snapshots;
};

void add_common(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config, "JSON config file (defaults apply when omitted)");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--n", flags.n, "number of curve samples");
    cmd->add_option("--dt", flags.dt, "time step");
    cmd->add_option("--steps", flags.steps, "number of simulation steps");
    cmd->add_option("--tolerance-scale", flags.tolerance_scale, "multiplier on residual tolerances");
}

darboux::RunConfig resolve(const Flags& flags) {
    darboux::RunConfig config = flags.config.empty() ? darboux::default_config() : darboux::load_config(flags.config);
    darboux::CommandOverrides o;
    o.out = flags.out;
    o.n = flags.n;
    o.dt = flags.dt;
    o.steps = flags.steps;
    o.tolerance_scale = flags.tolerance_scale;
    return darboux::apply_overrides(config, o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Darboux-frame curve analysis, identity verification and curve-flow simulation"};
    app.require_subcommand(1);
    Flags flags;
    CLI::App* analyze = app.add_subcommand("analyze", "per-sample scalars and classification of the configured curve");
    CLI::App* verify = app.add_subcommand("verify", "residuals of every identity on the built-in families");
    CLI::App* simulate = app.add_subcommand("simulate", "integrate the configured flow");
    CLI::App* render = app.add_subcommand("render", "draw simulation snapshots as SVG");
    for (CLI::App* cmd : {analyze, verify, simulate, render}) add_common(cmd, flags);
    render->add_option("--snapshots", flags.snapshots, "snapshot CSV (default OUT/snapshots.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const darboux::RunConfig config = resolve(flags);
        if (analyze->parsed()) return darboux::analyze_command(config, std::cout);
        if (verify->parsed()) return darboux::verify_command(config, std::cout);
        if (simulate->parsed()) return darboux::simulate_command(config, std::cout);
        const std::filesystem::path dir(config.output_directory);
        const std::filesystem::path input = flags.snapshots ? std::filesystem::path(*flags.snapshots)
                                                            : dir / "snapshots.csv";
        return darboux::render_command(input, dir / "trajectory.svg", std::cout);
    } catch (const darboux::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return darboux::exit_code_for(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: IoError: " << e.what() << '\n';
        return 4;
    }
}
