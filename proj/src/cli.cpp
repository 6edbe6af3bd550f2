// SPDX-License-Identifier: Apache-2.0
#include "uavopt/cli.hpp"

#include <cmath>
#include <sstream>

#include "uavopt/report_io.hpp"
#include "uavopt/scenario.hpp"
#include "uavopt/solver.hpp"

namespace uavopt {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMaxIters = 2;

Scenario load_effective(const RunManifest& man) {
    const std::string text = read_text_file(man.config_path);
    return parse_scenario_text(text, man.config_path, man.overrides);
}

void write_outputs(const std::filesystem::path& dir, const Scenario& s, const SolveReport& rep,
                   const std::string& command) {
    std::filesystem::create_directories(dir);
    write_text_atomic(dir / "report.json", report_to_json_text(rep, s, command));
    write_text_atomic(dir / "trajectory.csv", trajectory_csv(rep.final_trajectory));
    if (rep.final_beta.size() > 0) {
        write_text_atomic(dir / "rates.csv", rates_csv(s, rep));
    }
    write_text_atomic(dir / "convergence.csv", convergence_csv(rep));
}

int exit_code_for(const SolveReport& rep) {
    switch (rep.termination) {
        case Termination::converged: return kExitOk;
        case Termination::max_iters: return kExitMaxIters;
        case Termination::numerical: return kExitError;
    }
    return kExitError;
}

std::string point_label(const std::string& var, double value) {
    std::ostringstream os;
    os << var << '_';
    if (value == std::floor(value)) {
        os << static_cast<long long>(value);
    } else {
        os << format_double(value);
    }
    return os.str();
}

}  // namespace

int run_solve(const RunManifest& man, std::ostream& log) {
    try {
        Scenario s = load_effective(man);
        const bool baseline = man.command == Command::baseline;
        if (!man.quiet) {
            log << (baseline ? "baseline" : "solve") << ": K=" << s.num_users()
                << " N=" << s.num_slots << " from " << man.config_path << "\n";
        }
        SolveReport rep = baseline ? evaluate_baseline(s) : solve(s);
        write_outputs(man.out_dir, s, rep, baseline ? "baseline" : "solve");
        if (!man.quiet) {
            log << "termination=" << to_string(rep.termination) << " outer=" << rep.outer_iterations
                << " tau=" << format_double(rep.final_tau) << " bps"
                << " wall=" << rep.wall_clock.total_s << " s\n";
        }
        if (rep.termination == Termination::numerical) {
            log << "error: " << rep.error_message << "\n";
        }
        return exit_code_for(rep);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int run_sweep(const RunManifest& man, std::ostream& log) {
    if (man.sweep_var != "num_slots" && man.sweep_var != "p_max" && man.sweep_var != "v_max") {
        log << "error: sweep variable must be one of num_slots, p_max, v_max; got '"
            << man.sweep_var << "'\n";
        return kExitError;
    }
    if (man.sweep_values.empty()) {
        log << "error: sweep needs at least one value\n";
        return kExitError;
    }
    for (std::size_t i = 1; i < man.sweep_values.size(); ++i) {
        if (!(man.sweep_values[i] > man.sweep_values[i - 1])) {
            log << "error: sweep values must be strictly increasing\n";
            return kExitError;
        }
    }

    std::string config_text;
    try {
        config_text = read_text_file(man.config_path);
        std::filesystem::create_directories(man.out_dir);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitError;
    }

    // Config keys for the supported sweep variables.
    const std::string key = man.sweep_var == "num_slots" ? "num_slots"
                            : man.sweep_var == "p_max"   ? "p_max_w"
                                                         : "v_max_mps";

    std::ostringstream table;
    table << "# columns: " << man.sweep_var
          << " (sweep value), tau_solve_bps (bits/s), tau_baseline_bps (bits/s), "
             "wall_clock_s (seconds), outer_iters (count), status (ok|max_iters|error)\n";
    table << man.sweep_var << ",tau_solve_bps,tau_baseline_bps,wall_clock_s,outer_iters,status\n";

    bool any_error = false;
    bool any_max_iters = false;
    for (double value : man.sweep_values) {
        std::string status = "ok";
        double tau_solve = 0.0, tau_baseline = 0.0, wall = 0.0;
        int outer = 0;
        try {
            if (man.sweep_var == "num_slots" &&
                (value != std::floor(value) || value < 2 || value > 1e9)) {
                throw ValidationError("sweep value for num_slots must be an integer >= 2");
            }
            auto overrides = man.overrides;
            overrides.emplace_back(key, format_double(value));
            Scenario s = parse_scenario_text(config_text, man.config_path, overrides);

            const std::filesystem::path dir = man.out_dir / point_label(man.sweep_var, value);
            SolveReport rep = solve(s);
            write_outputs(dir, s, rep, "solve");
            SolveReport base = evaluate_baseline(s);
            write_text_atomic(dir / "baseline_report.json",
                              report_to_json_text(base, s, "baseline"));

            tau_solve = rep.final_tau;
            tau_baseline = base.final_tau;
            wall = rep.wall_clock.total_s + base.wall_clock.total_s;
            outer = rep.outer_iterations;
            if (rep.termination == Termination::numerical ||
                base.termination == Termination::numerical) {
                status = "error";
                any_error = true;
            } else if (rep.termination == Termination::max_iters) {
                status = "max_iters";
                any_max_iters = true;
            }
            if (!man.quiet) {
                log << "sweep " << man.sweep_var << "=" << format_double(value)
                    << ": tau_solve=" << format_double(tau_solve)
                    << " tau_baseline=" << format_double(tau_baseline) << " (" << status << ")\n";
            }
        } catch (const std::exception& e) {
            status = "error";
            any_error = true;
            log << "sweep " << man.sweep_var << "=" << format_double(value)
                << " failed: " << e.what() << "\n";
        }
        table << format_double(value) << ',' << format_double(tau_solve) << ','
              << format_double(tau_baseline) << ',' << format_double(wall) << ',' << outer << ','
              << status << '\n';
    }

    try {
        write_text_atomic(man.out_dir / "sweep.csv", table.str());
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitError;
    }
    if (any_error) return kExitError;
    if (any_max_iters) return kExitMaxIters;
    return kExitOk;
}

}  // namespace uavopt
