#pragma once

#include <optional>
#include <string>
#include <vector>

#include "npz/analysis.hpp"
#include "npz/config.hpp"

namespace npz {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitPositivity = 2,
    kExitBlowup = 3,  // also CFL violations
    kExitSingularity = 4,
    kExitCheckFailed = 5,
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::string error;  ///< set when a solver or config error aborted the run
    std::vector<InvariantReport> reports;
    std::optional<DecayFit> extinction;
    bool extinction_skipped = false;  ///< threshold applies but no mass in the window
    double final_int_p = 0.0;
    double final_z = 0.0;
};

/// Integrates, writes timeseries.csv / snapshot_<t>.csv / report.txt into
/// config.output_dir, and runs the invariant checks.
RunOutcome execute_run(const RunConfig& config);

int run_command(const RunConfig& config, bool quiet = false);

/// One run per value of the swept numeric key, each in
/// output_dir/run_<idx>, executed concurrently; writes sweep_summary.csv
/// with rows in input order. Returns 0 iff every run returned 0.
int sweep_command(const RunConfig& config, const std::string& key,
                  const std::vector<double>& values, bool quiet = false);

/// Re-runs the invariant checks on the files a previous run left in
/// config.output_dir and rewrites report.txt.
int check_command(const RunConfig& config, bool quiet = false);

}  // namespace npz
