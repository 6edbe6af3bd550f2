// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "uavopt/scenario.hpp"

namespace uavopt {

/// Cyclic difference operator D = D0 (x) I2 acting on stacked 2N waypoint
/// vectors, with a cached factorization of (rho1 I + rho2 D0^T D0).
///
/// D0 is the N x N matrix with +1 on the diagonal and -1 on the cyclic
/// superdiagonal, so (D q)_n = q[n] - q[n+1] with the last row wrapping.
/// The factorization is the only O(N^3) step and happens once per operator;
/// each solve is two N-dimensional triangular solves (O(N^2)).
class DifferenceOperator {
  public:
    DifferenceOperator(int n, double rho1, double rho2);

    int n() const { return n_; }
    double rho1() const { return rho1_; }
    double rho2() const { return rho2_; }

    /// D q, stacked hop displacements (2N).
    Eigen::VectorXd apply(const Eigen::VectorXd& q) const;
    /// D^T z (2N).
    Eigen::VectorXd apply_transpose(const Eigen::VectorXd& z) const;
    /// x with (rho1 I + rho2 D^T D) x = rhs, residual <= 1e-10 * ||rhs||.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  private:
    int n_;
    double rho1_, rho2_;
    Eigen::LLT<Eigen::MatrixXd> llt_;  // of the N x N block rho1 I + rho2 D0^T D0
};

DifferenceOperator build_operator(int n, double rho1, double rho2);

/// Process-wide count of factorizations performed, for cost instrumentation.
std::uint64_t factorization_count();

/// ADMM iterate blocks. Vectors are stacked (x1,y1,...,xN,yN); z holds the
/// hop displacements, m the consensus copy of q, and (t, y) the scaled duals
/// for m = q and Dq = z.
struct AdmmState {
    Eigen::VectorXd q, z, m, t, y;
    double rho1 = 0.0, rho2 = 0.0;
    int iter = 0;
    std::vector<double> primal_residuals, dual_residuals;
};

/// Minimizer of rho1 ||q - m + t||^2 + rho2 ||Dq - z + y||^2 via the cached solve.
Eigen::VectorXd q_update(const AdmmState& st, const DifferenceOperator& op);

/// Per-hop projection: z_n = min(s_max/||x||, 1) x with x = q[n] - q[n+1] + y_n.
Eigen::VectorXd z_update(const AdmmState& st, double s_max);

/// Closed-form slot update m[n] = (rho1 b[n] + what_n) / (rho1 + a_n) with
/// b[n] = q[n] + t[n], a_n = sum_k beta_k[n], what_n = sum_k beta_k[n] w_k.
Eigen::VectorXd m_update(const AdmmState& st, const BetaAllocation& beta, const Scenario& s);

/// Scaled dual ascent: t += q - m, y += Dq - z. Expects q, m, z already updated.
std::pair<Eigen::VectorXd, Eigen::VectorXd> dual_update(const AdmmState& st,
                                                        const DifferenceOperator& op);

struct AdmmTrace {
    std::vector<double> primal, dual;  // residual norms per iteration
    int iters = 0;
    bool converged = false;  // false means the iteration cap was hit
};

struct Subp2Result {
    Trajectory trajectory;
    AdmmTrace trace;
};

/// Trajectory update for fixed beta: minimizes sum_{k,n} beta_k[n] ||q[n]-w_k||^2
/// over speed-feasible cyclic trajectories by consensus ADMM, warm-started at
/// q_init. The returned trajectory is the consensus copy m, hop-clamped so the
/// speed constraint holds exactly, and never worse than the warm start.
Subp2Result solve_subp2(const Trajectory& q_init, const BetaAllocation& beta, const Scenario& s);

/// Same, reusing a prebuilt operator (the factorization is scenario-invariant).
Subp2Result solve_subp2(const Trajectory& q_init, const BetaAllocation& beta, const Scenario& s,
                        const DifferenceOperator& op);

/// Sequentially clamps each hop to length <= s_max (cyclic sweeps), leaving
/// every hop exactly feasible.
void clamp_hops(Trajectory& q, double s_max);

/// Objective of the trajectory subproblem, sum_{k,n} beta_k[n] ||q[n]-w_k||^2.
double trajectory_objective(const BetaAllocation& beta, const Scenario& s, const Trajectory& q);

}  // namespace uavopt
