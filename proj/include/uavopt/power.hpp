// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "uavopt/scenario.hpp"

namespace uavopt {

/// Water-filling solution for a single user at a fixed rate target.
struct WaterfillResult {
    Eigen::VectorXd beta_row;  // length N, >= 0
    double lambda = 0.0;       // dual multiplier fixing the water level
    double achieved_rate = 0.0;  // slot-averaged rate [bps], within tol of the target
};

/// Minimum-power allocation for one user: beta[n] = (B h[n] lambda / (N K ln2) - 1)^+
/// with lambda bisected until the average rate meets `tau` within
/// tol = tau * 1e-10 + 1e-6 bps. tau = 0 returns the zero allocation.
WaterfillResult waterfill_user(const Eigen::VectorXd& h_row, double tau, const Scenario& s);

struct PowerMinResult {
    BetaAllocation beta;
    double total_power = 0.0;  // [W]
};

/// Minimum total power meeting the per-user rate target `tau`; the problem
/// decouples, so this is K independent water-fills.
PowerMinResult power_min(const GainMatrix& h, double tau, const Scenario& s);

/// Uniformly rescales beta so the total power equals `p_max` to machine
/// precision. Throws DegenerateAllocationError on an all-zero allocation.
BetaAllocation scale_to_budget(const BetaAllocation& beta, const GainMatrix& h, double p_max);

struct Subp1Iter {
    double tau = 0.0;             // min average throughput after rescale [bps]
    double unscaled_power = 0.0;  // power of the water-filled allocation [W]
    double scale = 1.0;           // p_max / unscaled_power
};

struct Subp1Result {
    BetaAllocation beta;  // power exactly p_max
    double tau = 0.0;     // [bps]
    std::vector<Subp1Iter> trace;
};

/// Max-min throughput over beta for fixed gains: a fixed-point loop that
/// alternates the dual power minimization with a rescale to the full budget.
/// Bootstrapped with the uniform power split p_max/(K N), which is strictly
/// feasible; stops once the water-filled power reaches p_max within
/// eps_power (relative) or tau stops increasing.
Subp1Result solve_subp1(const GainMatrix& h, const Scenario& s);

}  // namespace uavopt
