#include "npz/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace npz {

namespace {

std::string fmt_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

std::string timeseries_csv(const Trajectory& traj) {
    std::string out = "t,z,int_p,int_gp,min_n,max_n,min_p,flux_residual\n";
    for (const SnapshotStats& d : traj.diagnostics) {
        out += csv_double(d.t);
        out += ',';
        out += csv_double(d.z);
        out += ',';
        out += csv_double(d.int_p);
        out += ',';
        out += csv_double(d.int_gp);
        out += ',';
        out += csv_double(d.min_n);
        out += ',';
        out += csv_double(d.max_n);
        out += ',';
        out += csv_double(d.min_p);
        out += ',';
        out += csv_double(d.flux_residual);
        out += '\n';
    }
    return out;
}

std::string snapshot_csv(const State& s, const Grid& grid) {
    std::string out = "h,n,p\n";
    for (int j = 0; j < grid.M; ++j) {
        out += csv_double(grid.node(j));
        out += ',';
        out += csv_double(s.n[j]);
        out += ',';
        out += csv_double(s.p[j]);
        out += '\n';
    }
    return out;
}

std::string snapshot_name(double t) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "snapshot_%.6f.csv", t);
    return buf;
}

Window fit_window(const RunConfig& cfg, const Trajectory& traj) {
    const double t_end = traj.snapshots.back().t;
    Window w;
    w.lo = cfg.fit_window_lo >= 0.0 ? cfg.fit_window_lo : 0.25 * t_end;
    w.hi = cfg.fit_window_hi >= 0.0 ? cfg.fit_window_hi : 0.50 * t_end;
    return w;
}

struct CheckSet {
    std::vector<InvariantReport> reports;
    std::optional<DecayFit> extinction;
    bool extinction_skipped = false;

    bool all_passed() const {
        for (const InvariantReport& r : reports)
            if (!r.passed) return false;
        return !extinction || extinction->passed;
    }
};

CheckSet run_checks(const Trajectory& traj, const RunConfig& cfg, const Grid& grid) {
    CheckSet cs;
    cs.reports.push_back(check_positivity(traj, cfg.solver.positivity_tol));
    cs.reports.push_back(check_n_bound(traj, cfg.params));
    if (traj.snapshots.size() >= 2)
        cs.reports.push_back(check_z_inequality(traj, cfg.params, cfg.response, grid));
    if (cfg.params.m_p > cfg.params.max_growth_rate() && traj.snapshots.size() >= 2) {
        try {
            cs.extinction = fit_extinction(traj, cfg.params, fit_window(cfg, traj));
        } catch (const std::domain_error&) {
            cs.extinction_skipped = true;  // no phytoplankton mass in the window
        } catch (const std::invalid_argument&) {
            cs.extinction_skipped = true;  // window too short for a fit
        }
    }
    return cs;
}

std::string report_text(const CheckSet& cs) {
    std::string out;
    for (const InvariantReport& r : cs.reports) {
        out += r.name + ' ' + (r.passed ? "PASS" : "FAIL") + " worst=" + fmt_short(r.worst) +
               " t=" + fmt_short(r.time) + '\n';
    }
    if (cs.extinction) {
        const DecayFit& f = *cs.extinction;
        out += std::string("EXTINCTION_RATE ") + (f.passed ? "PASS" : "FAIL") +
               " worst=" + fmt_short(f.rate) + " t=" + fmt_short(f.window.hi) + '\n';
    } else if (cs.extinction_skipped) {
        out += "EXTINCTION_RATE SKIP worst=nan t=nan\n";
    }
    return out;
}

void clear_old_snapshots(const fs::path& dir) {
    if (!fs::exists(dir)) return;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("snapshot_", 0) == 0 && entry.path().extension() == ".csv")
            fs::remove(entry.path());
    }
}

int classify(const std::exception& e) {
    if (dynamic_cast<const PositivityError*>(&e)) return kExitPositivity;
    if (dynamic_cast<const BlowupError*>(&e)) return kExitBlowup;  // includes CflError
    if (dynamic_cast<const SingularityError*>(&e)) return kExitSingularity;
    return kExitConfig;
}

struct SweepRow {
    double value = 0.0;
    RunOutcome outcome;
};

std::string flag(const std::vector<InvariantReport>& reports, const std::string& name,
                 bool run_failed) {
    if (run_failed) return "ERROR";
    for (const InvariantReport& r : reports)
        if (r.name == name) return r.passed ? "PASS" : "FAIL";
    return "SKIP";
}

std::string sweep_summary_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "value,exit,final_int_p,final_z,decay_rate,positivity,n_bound,z_inequality,"
        "extinction_rate\n";
    for (const SweepRow& row : rows) {
        const RunOutcome& o = row.outcome;
        const bool failed = o.exit_code != kExitOk && o.exit_code != kExitCheckFailed;
        out += csv_double(row.value);
        out += ',';
        out += std::to_string(o.exit_code);
        out += ',';
        out += failed ? "nan" : csv_double(o.final_int_p);
        out += ',';
        out += failed ? "nan" : csv_double(o.final_z);
        out += ',';
        out += o.extinction ? csv_double(o.extinction->rate) : "nan";
        out += ',';
        out += flag(o.reports, "POSITIVITY", failed);
        out += ',';
        out += flag(o.reports, "N_BOUND", failed);
        out += ',';
        out += flag(o.reports, "Z_INEQUALITY", failed);
        out += ',';
        if (failed)
            out += "ERROR";
        else if (o.extinction)
            out += o.extinction->passed ? "PASS" : "FAIL";
        else
            out += "SKIP";
        out += '\n';
    }
    return out;
}

}  // namespace

RunOutcome execute_run(const RunConfig& config) {
    RunOutcome out;
    try {
        const Grid grid(config.params.H, config.grid_m);
        const State initial = build_initial_state(config, grid);
        const Trajectory traj =
            integrate(initial, config.params, config.light, config.response, grid, config.solver);

        const fs::path dir(config.output_dir);
        fs::create_directories(dir);
        clear_old_snapshots(dir);
        write_file(dir / "timeseries.csv", timeseries_csv(traj));
        for (const State& s : traj.snapshots)
            write_file(dir / snapshot_name(s.t), snapshot_csv(s, grid));

        const CheckSet cs = run_checks(traj, config, grid);
        write_file(dir / "report.txt", report_text(cs));

        out.reports = cs.reports;
        out.extinction = cs.extinction;
        out.extinction_skipped = cs.extinction_skipped;
        out.final_int_p = traj.diagnostics.back().int_p;
        out.final_z = traj.diagnostics.back().z;
        out.exit_code = cs.all_passed() ? kExitOk : kExitCheckFailed;
    } catch (const std::exception& e) {
        out.exit_code = classify(e);
        out.error = e.what();
    }
    return out;
}

int run_command(const RunConfig& config, bool quiet) {
    const RunOutcome out = execute_run(config);
    if (!out.error.empty()) {
        std::cerr << "error: " << out.error << " (exit " << out.exit_code << ")\n";
        return out.exit_code;
    }
    if (!quiet) {
        CheckSet cs;
        cs.reports = out.reports;
        cs.extinction = out.extinction;
        cs.extinction_skipped = out.extinction_skipped;
        std::cout << report_text(cs);
        std::cout << "final int_p = " << fmt_short(out.final_int_p)
                  << ", final z = " << fmt_short(out.final_z) << "\n";
    }
    return out.exit_code;
}

int sweep_command(const RunConfig& config, const std::string& key,
                  const std::vector<double>& values, bool quiet) {
    if (values.empty()) {
        std::cerr << "error: sweep needs at least one value\n";
        return kExitConfig;
    }
    const fs::path parent(config.output_dir);
    fs::create_directories(parent);

    std::vector<std::future<SweepRow>> futures;
    futures.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        futures.push_back(std::async(std::launch::async, [&, i]() {
            SweepRow row;
            row.value = values[i];
            char sub[32];
            std::snprintf(sub, sizeof(sub), "run_%03zu", i);
            RunConfig local = config;
            local.output_dir = (parent / sub).string();
            try {
                apply_override(local, key, values[i]);
            } catch (const ConfigError& e) {
                row.outcome.exit_code = kExitConfig;
                row.outcome.error = e.what();
                return row;
            }
            row.outcome = execute_run(local);
            return row;
        }));
    }

    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    int exit_code = kExitOk;
    for (std::size_t i = 0; i < futures.size(); ++i) {
        rows.push_back(futures[i].get());
        const RunOutcome& o = rows.back().outcome;
        if (o.exit_code != kExitOk && exit_code == kExitOk) exit_code = o.exit_code;
        if (!quiet) {
            std::cout << key << " = " << fmt_short(values[i]) << " -> exit " << o.exit_code;
            if (!o.error.empty()) std::cout << " (" << o.error << ")";
            std::cout << "\n";
        }
    }
    write_file(parent / "sweep_summary.csv", sweep_summary_csv(rows));
    return exit_code;
}

namespace {

std::vector<std::vector<double>> read_csv(const fs::path& path, const std::string& header) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("empty file '" + path.string() + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header)
        throw ConfigError("unexpected header in '" + path.string() + "'");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    return rows;
}

Trajectory load_trajectory(const RunConfig& cfg, const Grid& grid) {
    const fs::path dir(cfg.output_dir);
    const auto series =
        read_csv(dir / "timeseries.csv", "t,z,int_p,int_gp,min_n,max_n,min_p,flux_residual");
    if (series.empty()) throw ConfigError("timeseries.csv has no rows");

    std::vector<std::pair<double, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("snapshot_", 0) != 0 || entry.path().extension() != ".csv") continue;
        const std::string stamp = name.substr(9, name.size() - 9 - 4);
        files.emplace_back(std::strtod(stamp.c_str(), nullptr), entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.size() != series.size())
        throw ConfigError("found " + std::to_string(files.size()) + " snapshot files for " +
                          std::to_string(series.size()) + " timeseries rows");

    Trajectory traj;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const auto rows = read_csv(files[i].second, "h,n,p");
        if (static_cast<int>(rows.size()) != grid.M)
            throw ConfigError("snapshot '" + files[i].second.string() + "' has " +
                              std::to_string(rows.size()) + " rows, grid needs " +
                              std::to_string(grid.M));
        State s;
        s.t = series[i][0];
        s.z = series[i][1];
        s.n.resize(grid.M);
        s.p.resize(grid.M);
        for (int j = 0; j < grid.M; ++j) {
            s.n[j] = rows[j][1];
            s.p[j] = rows[j][2];
        }
        traj.diagnostics.push_back(compute_snapshot_stats(
            s, traj.snapshots.empty() ? nullptr : &traj.snapshots.back(), cfg.params,
            cfg.response, grid));
        traj.snapshots.push_back(std::move(s));
    }
    return traj;
}

}  // namespace

int check_command(const RunConfig& config, bool quiet) {
    try {
        const Grid grid(config.params.H, config.grid_m);
        const Trajectory traj = load_trajectory(config, grid);
        const CheckSet cs = run_checks(traj, config, grid);
        write_file(fs::path(config.output_dir) / "report.txt", report_text(cs));
        if (!quiet) std::cout << report_text(cs);
        return cs.all_passed() ? kExitOk : kExitCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    }
}

}  // namespace npz
