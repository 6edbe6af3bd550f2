// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace uavopt {

enum class Command { solve, baseline, sweep };

/// One CLI invocation: config, output directory, command and its knobs.
struct RunManifest {
    std::string config_path;
    std::filesystem::path out_dir;
    Command command = Command::solve;
    std::string sweep_var;             // num_slots | p_max | v_max
    std::vector<double> sweep_values;  // strictly increasing
    std::vector<std::pair<std::string, std::string>> overrides;  // KEY, VALUE
    bool quiet = false;
};

/// Runs solve or baseline per the manifest and writes report.json,
/// trajectory.csv, rates.csv and convergence.csv into out_dir.
/// Exit codes: 0 converged, 2 iteration cap, 1 error (partial output kept).
int run_solve(const RunManifest& man, std::ostream& log = std::cerr);

/// One solve plus one baseline per sweep value; per-point outputs go to
/// subdirectories and the aggregate table to sweep.csv. Point failures are
/// recorded in the table and the sweep continues.
int run_sweep(const RunManifest& man, std::ostream& log = std::cerr);

}  // namespace uavopt
