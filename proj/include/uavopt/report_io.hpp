// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "uavopt/solver.hpp"

namespace uavopt {

/// Shortest representation that parses back to the identical double.
std::string format_double(double v);

/// Report document (JSON) with the effective config, traces and the solution.
std::string report_to_json_text(const SolveReport& rep, const Scenario& s,
                                const std::string& command);

// CSV emitters. Each table starts with one '#' comment line documenting
// columns and units, then a header row. Numbers round-trip exactly.
std::string trajectory_csv(const Trajectory& q);
std::string rates_csv(const Scenario& s, const SolveReport& rep);
std::string convergence_csv(const SolveReport& rep);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Parses a CSV produced by the emitters above ('#' lines skipped).
CsvTable parse_csv(const std::string& text);

/// Writes via a temp file + rename so readers never observe partial files.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace uavopt
