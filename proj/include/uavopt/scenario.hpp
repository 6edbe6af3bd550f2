// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "uavopt/errors.hpp"

namespace uavopt {

/// K x N matrix of effective channel gains h_k[n] (dimensionless, > 0).
using GainMatrix = Eigen::MatrixXd;
/// K x N matrix of received-SNR variables beta_k[n] = p_k[n] * h_k[n] (>= 0).
using BetaAllocation = Eigen::MatrixXd;
/// K x N matrix of instantaneous per-user rates in bps.
using RateMatrix = Eigen::MatrixXd;

/// Immutable physical setup: user layout, channel constants, power budget,
/// slot grid, plus the solver knobs read from the same config file.
///
/// Units: meters, seconds, Watts, Hz, bps throughout. No unit wrappers;
/// the config schema and validation ranges are the convention.
struct Scenario {
    std::vector<Eigen::Vector2d> users;  // ground user positions w_k [m]
    double altitude = 100.0;             // H [m]
    double bandwidth = 1.0e7;            // B [Hz]
    double slot_len = 1.0;               // delta [s]
    int num_slots = 60;                  // N
    double v_max = 50.0;                 // [m/s]
    double p_max = 0.5;                  // total transmit power budget [W]
    double noise_psd = 1.0e-20;          // N0 [W/Hz]
    double gamma0 = 1.0e-5;              // channel gain at 1 m reference distance

    // solver parameters
    double rho1 = 0.01;                  // ADMM penalty on m = q
    double rho2 = 1.25;                  // ADMM penalty on Dq = z
    double eps_power = 1.0e-5;           // power-gap threshold, relative to p_max
    double eps_outer = 1.0e-5;           // outer-loop fractional tau threshold
    int max_outer_iters = 100;
    int max_admm_iters = 20000;
    double tol_admm = 1.0e-4;            // ADMM residual tolerance [m]; 0 forces max_admm_iters
    double tol_feas = 1.0e-6;            // relative slack accepted on hop revalidation
    bool admm_z_uses_stale_q = false;    // reproduce the z-update against the previous q

    int num_users() const { return static_cast<int>(users.size()); }
    /// Maximum horizontal distance per slot, S_max = v_max * delta.
    double s_max() const { return v_max * slot_len; }
    /// Aggregated channel constant gamma0 * K / (B * N0).
    double gamma_tilde() const {
        return gamma0 * static_cast<double>(num_users()) / (bandwidth * noise_psd);
    }
};

/// N horizontal waypoints, interpreted cyclically: the hop after the last
/// point returns to the first, so periodicity holds by construction.
struct Trajectory {
    Eigen::Matrix2Xd pts;  // column n = q[n] [m]

    int num_points() const { return static_cast<int>(pts.cols()); }
    Eigen::Vector2d hop(int n) const {
        return pts.col((n + 1) % pts.cols()) - pts.col(n);
    }
    double max_hop() const {
        double m = 0.0;
        for (int n = 0; n < num_points(); ++n) m = std::max(m, hop(n).norm());
        return m;
    }
};

/// Throws ValidationError naming the offending field if any invariant fails.
void validate(const Scenario& s);

/// Hop-length check: every hop must satisfy ||hop|| <= s_max * (1 + tol).
void validate(const Scenario& s, const Trajectory& q, double tol);
inline void validate(const Scenario& s, const Trajectory& q) { validate(s, q, s.tol_feas); }

/// Loads and validates a scenario config file (JSON; see README for the schema).
/// Unspecified fields take the documented defaults.
Scenario load_scenario(const std::string& path);

/// Same as load_scenario but parses an in-memory document. `origin` is used in
/// error messages; `overrides` are KEY=VALUE pairs applied on top of the file.
Scenario parse_scenario_text(const std::string& json_text, const std::string& origin,
                             const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Serializes the effective (post-default, post-override) configuration.
std::string scenario_to_json_text(const Scenario& s);

/// h_k[n] = gamma_tilde / (H^2 + ||q[n] - w_k||^2).
GainMatrix channel_gains(const Scenario& s, const Trajectory& q);

/// R_k[n] = (B/K) log2(1 + beta_k[n]) [bps].
RateMatrix rates(const Scenario& s, const BetaAllocation& beta);

/// min over users of the slot-averaged rate (1/N) sum_n R_k[n] [bps].
double min_avg_throughput(const Scenario& s, const BetaAllocation& beta);

/// Total transmit power sum_{k,n} beta_k[n] / h_k[n] [W].
double power_used(const BetaAllocation& beta, const GainMatrix& h);

}  // namespace uavopt
