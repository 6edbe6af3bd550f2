// SPDX-License-Identifier: Apache-2.0
#include "uavopt/solver.hpp"

#include <chrono>
#include <cmath>

namespace uavopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::Vector2d user_centroid(const Scenario& s) {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (const auto& w : s.users) c += w;
    return c / static_cast<double>(s.users.size());
}

Trajectory circle_at(const Eigen::Vector2d& center, double radius, int n) {
    Trajectory q;
    q.pts.resize(2, n);
    for (int i = 0; i < n; ++i) {
        const double theta = 2.0 * M_PI * i / n;
        q.pts.col(i) = center + radius * Eigen::Vector2d(std::cos(theta), std::sin(theta));
    }
    return q;
}

}  // namespace

const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iters: return "max_iters";
        case Termination::numerical: return "numerical";
    }
    return "unknown";
}

Trajectory initial_trajectory(const Scenario& s) {
    const int n = s.num_slots;
    const Eigen::Vector2d c = user_centroid(s);
    const double r_nominal = s.v_max * s.slot_len * (n - 1) / (2.0 * M_PI);
    const double r_feasible = s.s_max() / (2.0 * std::sin(M_PI / n));
    double r = std::min(r_nominal, r_feasible);

    Trajectory q = circle_at(c, r, n);
    // The chord length sits at most a rounding error above s_max; shave the
    // radius until the hop check passes exactly.
    for (int guard = 0; guard < 8 && q.max_hop() > s.s_max(); ++guard) {
        r *= (1.0 - 1e-12);
        q = circle_at(c, r, n);
    }
    return q;
}

SolveReport solve(const Scenario& s) {
    validate(s);
    SolveReport rep;
    const auto t_start = Clock::now();
    Trajectory q = initial_trajectory(s);

    try {
        DifferenceOperator op = build_operator(s.num_slots, s.rho1, s.rho2);
        double tau_prev = 0.0;
        bool converged = false;

        for (int outer = 1; outer <= s.max_outer_iters; ++outer) {
            const auto t1 = Clock::now();
            GainMatrix h = channel_gains(s, q);
            Subp1Result p1 = solve_subp1(h, s);
            rep.wall_clock.subp1_s += seconds_since(t1);

            const auto t2 = Clock::now();
            Subp2Result p2 = solve_subp2(q, p1.beta, s, op);
            rep.wall_clock.subp2_s += seconds_since(t2);

            q = p2.trajectory;
            rep.tau_trace.push_back(p1.tau);
            rep.power_trace.push_back(power_used(p1.beta, h));
            rep.admm_traces.push_back(std::move(p2.trace));
            rep.outer_iterations = outer;

            if ((p1.tau - tau_prev) / std::max(tau_prev, 1e-3) < s.eps_outer) {
                converged = true;
                break;
            }
            tau_prev = p1.tau;
        }
        rep.termination = converged ? Termination::converged : Termination::max_iters;

        // One more power pass against the final trajectory so the emitted
        // (power, trajectory) pair is jointly feasible.
        const auto t3 = Clock::now();
        GainMatrix h = channel_gains(s, q);
        Subp1Result fin = solve_subp1(h, s);
        rep.wall_clock.subp1_s += seconds_since(t3);
        rep.tau_trace.push_back(fin.tau);
        rep.final_tau = fin.tau;
        rep.final_beta = std::move(fin.beta);
        rep.final_power = rep.final_beta.cwiseQuotient(h);
        rep.final_trajectory = q;
    } catch (const Error& e) {
        rep.termination = Termination::numerical;
        rep.error_message = e.what();
        rep.final_trajectory = q;
    }

    rep.wall_clock.total_s = seconds_since(t_start);
    return rep;
}

SolveReport evaluate_baseline(const Scenario& s) {
    validate(s);
    SolveReport rep;
    const auto t_start = Clock::now();
    Trajectory q = initial_trajectory(s);
    try {
        GainMatrix h = channel_gains(s, q);
        Subp1Result p1 = solve_subp1(h, s);
        rep.wall_clock.subp1_s = seconds_since(t_start);
        rep.outer_iterations = 1;
        rep.tau_trace.push_back(p1.tau);
        rep.power_trace.push_back(power_used(p1.beta, h));
        rep.final_tau = p1.tau;
        rep.final_beta = std::move(p1.beta);
        rep.final_power = rep.final_beta.cwiseQuotient(h);
        rep.final_trajectory = q;
        rep.termination = Termination::converged;
    } catch (const Error& e) {
        rep.termination = Termination::numerical;
        rep.error_message = e.what();
        rep.final_trajectory = q;
    }
    rep.wall_clock.total_s = seconds_since(t_start);
    return rep;
}

}  // namespace uavopt
