// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "uavopt/power.hpp"
#include "uavopt/trajectory.hpp"

namespace uavopt {

enum class Termination { converged, max_iters, numerical };

const char* to_string(Termination t);

struct PhaseClock {
    double subp1_s = 0.0;
    double subp2_s = 0.0;
    double total_s = 0.0;
};

/// Everything a run produces: traces across outer iterations plus the final
/// mutually consistent (power, trajectory) pair.
struct SolveReport {
    int outer_iterations = 0;
    std::vector<double> tau_trace;   // bps; one entry per outer iteration,
                                     // plus the final consistency pass
    std::vector<double> power_trace; // W, per outer iteration
    std::vector<AdmmTrace> admm_traces;
    Trajectory final_trajectory;
    BetaAllocation final_beta;
    Eigen::MatrixXd final_power;     // K x N, p_k[n] = beta_k[n] / h_k[n] [W]
    double final_tau = 0.0;          // bps
    PhaseClock wall_clock;
    Termination termination = Termination::converged;
    std::string error_message;       // set when termination == numerical
};

/// Circular start: N points evenly spaced around the user centroid with
/// radius min(v_max * delta * (N-1) / (2 pi), largest speed-feasible radius).
Trajectory initial_trajectory(const Scenario& s);

/// Full alternating optimization: power subproblem, trajectory subproblem,
/// repeat until the fractional increase of tau drops below eps_outer. A last
/// power pass against the final trajectory makes the emitted pair consistent.
SolveReport solve(const Scenario& s);

/// Comparison anchor: optimal power on the fixed initial circle, no
/// trajectory update.
SolveReport evaluate_baseline(const Scenario& s);

}  // namespace uavopt
