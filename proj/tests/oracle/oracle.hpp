// SPDX-License-Identifier: Apache-2.0
//
// Brute-force and first-principles reference solvers used only by tests.
// Nothing here may touch the production solver paths; only the plain data
// types from scenario.hpp are shared.
#pragma once

#include <Eigen/Dense>

#include "uavopt/scenario.hpp"

namespace uavopt::oracle {

struct GridSpec {
    int resolution = 32;   // points per dimension, >= 16
    int levels = 28;       // refinement passes
    double shrink = 4.0;   // bound contraction per level, >= 4
};

/// Grid + refinement minimizer of the per-user minimum-power problem:
/// min sum beta_n / h_n  s.t. (1/N) sum (B/K) log2(1 + beta_n) >= tau.
/// Exhaustive over the rate-constraint surface; supports N <= 3 only.
Eigen::VectorXd oracle_waterfill(const Eigen::VectorXd& h_row, double tau, const Scenario& s,
                                 const GridSpec& grid = {});

/// Independent evaluation of sum_{k,n} beta_k[n] ||q[n] - w_k||^2.
double oracle_trajectory_objective(const BetaAllocation& beta, const Scenario& s,
                                   const Trajectory& q);

/// Projected-gradient reference for the trajectory subproblem: steps
/// 1/(L (1 + j/decay)) with L = 4 max_n a_n, decay tied to the budget, and
/// cyclic per-hop projection. Returns the best feasible iterate.
Trajectory oracle_subp2(const Trajectory& q_init, const BetaAllocation& beta, const Scenario& s,
                        long max_iters = 200000);

/// 2-D grid + refinement minimizer of the per-slot consensus objective
/// sum_k beta_k ||m - w_k||^2 + rho1 ||m - b||^2.
Eigen::Vector2d oracle_slot_min(const Eigen::VectorXd& beta_col,
                                const std::vector<Eigen::Vector2d>& users, double rho1,
                                const Eigen::Vector2d& b, const GridSpec& grid = {});

/// Dense route for the regularized difference system: assembles the full
/// 2N x 2N matrix rho1 I + rho2 D^T D from the cyclic-difference definition
/// and solves by Gaussian elimination with partial pivoting.
Eigen::VectorXd oracle_dense_solve(int n, double rho1, double rho2, const Eigen::VectorXd& rhs);

struct SubgradientResult {
    double tau = 0.0;  // bps
    Eigen::MatrixXd beta;
};

/// Projected-subgradient reference for the max-min throughput problem at
/// fixed gains (budget and nonnegativity constraints), run in power
/// coordinates with normalized steps, geometric annealing and restarts.
SubgradientResult oracle_subp1_subgradient(const GainMatrix& h, const Scenario& s,
                                           long max_iters = 60000,
                                           int step_halving_period = 1200);

/// Single-user max-min reference at a fixed total power: bisects the power
/// water level until the budget is met and evaluates the resulting rate.
double oracle_single_user_tau(const Eigen::VectorXd& h_row, double p_total, const Scenario& s);

}  // namespace uavopt::oracle
