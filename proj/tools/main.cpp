// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavopt/cli.hpp"

namespace {

std::vector<std::pair<std::string, std::string>> parse_overrides(
    const std::vector<std::string>& raw) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& kv : raw) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size()) {
            throw CLI::ValidationError("--override", "expected KEY=VALUE, got '" + kv + "'");
        }
        out.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint UAV transmit-power and flight-trajectory optimizer"};
    app.require_subcommand(1);

    uavopt::RunManifest man;
    std::vector<std::string> raw_overrides;
    std::string sweep_spec;
    int max_outer = -1, max_admm = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", man.config_path, "scenario config file (JSON)")->required();
        sub->add_option("--out", man.out_dir, "output directory")->required();
        sub->add_option("--override", raw_overrides, "config override KEY=VALUE (repeatable)");
        sub->add_option("--max-outer", max_outer, "cap on outer iterations");
        sub->add_option("--max-admm", max_admm, "cap on ADMM iterations per trajectory update");
        sub->add_flag("--quiet", man.quiet, "suppress progress output");
    };

    CLI::App* solve = app.add_subcommand("solve", "run the full alternating optimization");
    add_common(solve);
    CLI::App* baseline =
        app.add_subcommand("baseline", "optimal power on the fixed initial circle");
    add_common(baseline);
    CLI::App* sweep = app.add_subcommand("sweep", "solve + baseline across a parameter sweep");
    add_common(sweep);
    sweep->add_option("--sweep", sweep_spec, "VAR=v1,v2,... with VAR in {num_slots, p_max, v_max}")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        man.overrides = parse_overrides(raw_overrides);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (max_outer > 0) man.overrides.emplace_back("max_outer_iters", std::to_string(max_outer));
    if (max_admm > 0) man.overrides.emplace_back("max_admm_iters", std::to_string(max_admm));

    if (solve->parsed()) man.command = uavopt::Command::solve;
    if (baseline->parsed()) man.command = uavopt::Command::baseline;
    if (sweep->parsed()) {
        man.command = uavopt::Command::sweep;
        const auto eq = sweep_spec.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --sweep expects VAR=v1,v2,...\n";
            return 1;
        }
        man.sweep_var = sweep_spec.substr(0, eq);
        std::string values = sweep_spec.substr(eq + 1);
        std::size_t start = 0;
        try {
            while (start <= values.size()) {
                std::size_t comma = values.find(',', start);
                const std::string tok = values.substr(start, comma - start);
                man.sweep_values.push_back(std::stod(tok));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        } catch (const std::exception&) {
            std::cerr << "error: bad numeric value in --sweep '" << values << "'\n";
            return 1;
        }
        return uavopt::run_sweep(man, std::cerr);
    }
    return uavopt::run_solve(man, std::cerr);
}
