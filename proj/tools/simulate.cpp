// Command-line front end: run a single column simulation, sweep a numeric
// config key, or re-check the invariants on stored outputs.

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "npz/runner.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("config", opts.config_path, "configuration file")->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides output.dir)");
    cmd->add_flag("--quiet", opts.quiet, "suppress per-check output");
}

int load_and_dispatch(const CommonOpts& opts,
                      const std::function<int(const npz::RunConfig&)>& fn) {
    try {
        npz::RunConfig config = npz::load_config(opts.config_path);
        if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
        return fn(config);
    } catch (const npz::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return npz::kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D water-column nutrient/phytoplankton/zooplankton simulator"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    CLI::App* run = app.add_subcommand("run", "integrate one configuration");
    add_common(run, run_opts);

    CommonOpts sweep_opts;
    std::string sweep_key;
    std::vector<double> sweep_values;
    CLI::App* sweep = app.add_subcommand("sweep", "run once per value of a numeric key");
    add_common(sweep, sweep_opts);
    sweep->add_option("--key", sweep_key, "dotted config key to sweep")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")
        ->required()
        ->delimiter(',');

    CommonOpts check_opts;
    CLI::App* check = app.add_subcommand("check", "re-run invariant checks on stored outputs");
    add_common(check, check_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : npz::kExitConfig;
    }

    if (run->parsed())
        return load_and_dispatch(run_opts, [&](const npz::RunConfig& c) {
            return npz::run_command(c, run_opts.quiet);
        });
    if (sweep->parsed())
        return load_and_dispatch(sweep_opts, [&](const npz::RunConfig& c) {
            return npz::sweep_command(c, sweep_key, sweep_values, sweep_opts.quiet);
        });
    return load_and_dispatch(check_opts, [&](const npz::RunConfig& c) {
        return npz::check_command(c, check_opts.quiet);
    });
}
