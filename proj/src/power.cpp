// SPDX-License-Identifier: Apache-2.0
#include "uavopt/power.hpp"

#include <cmath>
#include <sstream>

namespace uavopt {

namespace {

// (1/N) sum_n (B/K) log2(1 + beta_n)
double avg_rate(const Eigen::VectorXd& beta, double bandwidth, int num_users) {
    const double n = static_cast<double>(beta.size());
    return bandwidth / (num_users * n * M_LN2) * beta.array().log1p().sum();
}

}  // namespace

WaterfillResult waterfill_user(const Eigen::VectorXd& h_row, double tau, const Scenario& s) {
    const int n = static_cast<int>(h_row.size());
    if (tau < 0.0 || !std::isfinite(tau)) {
        throw std::invalid_argument("waterfill_user: rate target must be >= 0, got " +
                                    std::to_string(tau));
    }
    if (n != s.num_slots) {
        throw std::invalid_argument("waterfill_user: gain row has " + std::to_string(n) +
                                    " slots, scenario expects " + std::to_string(s.num_slots));
    }
    if (!(h_row.allFinite() && h_row.minCoeff() > 0.0)) {
        throw std::invalid_argument("waterfill_user: gains must be positive and finite");
    }
    if (tau == 0.0) return {Eigen::VectorXd::Zero(n), 0.0, 0.0};

    const double B = s.bandwidth;
    const double K = static_cast<double>(s.num_users());
    const double N = static_cast<double>(n);
    const double level_per_lambda = B / (N * K * M_LN2);  // beta_n = (level_per_lambda*h_n*lambda - 1)^+
    const double tol_rate = tau * 1e-10 + 1e-6;

    Eigen::VectorXd beta(n);
    auto fill_at = [&](double lambda) {
        beta = (level_per_lambda * lambda * h_row.array() - 1.0).max(0.0).matrix();
        return avg_rate(beta, B, s.num_users());
    };

    // Bracket by doubling from the activation threshold of the best slot
    // (rate zero there), which pins the water level between consecutive
    // powers of two. A loose analytic upper seed leaves the 200-step
    // bisection too coarse on long horizons.
    double hi = (N * K * M_LN2) / (B * h_row.maxCoeff());
    double lo = 0.0;
    int guard = 0;
    while (!(fill_at(hi) > tau)) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 2000 || !std::isfinite(hi)) {
            throw NumericalError("waterfill_user: failed to bracket the water level");
        }
    }

    double lambda = hi;
    double rate = fill_at(lambda);
    for (int it = 0; it < 200; ++it) {
        lambda = 0.5 * (lo + hi);
        rate = fill_at(lambda);
        if (std::abs(rate - tau) <= tol_rate) break;
        if (rate > tau) {
            hi = lambda;
        } else {
            lo = lambda;
        }
    }
    return {beta, lambda, rate};
}

PowerMinResult power_min(const GainMatrix& h, double tau, const Scenario& s) {
    const int K = static_cast<int>(h.rows());
    const int N = static_cast<int>(h.cols());
    BetaAllocation beta(K, N);
    for (int k = 0; k < K; ++k) {
        beta.row(k) = waterfill_user(h.row(k).transpose(), tau, s).beta_row.transpose();
    }
    return {beta, power_used(beta, h)};
}

BetaAllocation scale_to_budget(const BetaAllocation& beta, const GainMatrix& h, double p_max) {
    const double p = power_used(beta, h);
    if (!(p > 0.0)) {
        throw DegenerateAllocationError(
            "scale_to_budget: allocation uses no power; bootstrap the loop first");
    }
    return beta * (p_max / p);
}

Subp1Result solve_subp1(const GainMatrix& h, const Scenario& s) {
    if (!(h.allFinite() && h.minCoeff() > 0.0)) {
        throw NumericalError("solve_subp1: gain matrix must be positive and finite");
    }
    const double p_max = s.p_max;
    const double kn = static_cast<double>(h.size());

    // Uniform power split: strictly feasible and symmetric, which gives a
    // positive rate target to seed the dual loop (tau = 0 would stall it).
    BetaAllocation beta = h * (p_max / kn);
    double tau = min_avg_throughput(s, beta);
    Subp1Result res;
    res.trace.push_back({tau, p_max, 1.0});

    constexpr int kMaxIters = 10000;
    for (int it = 1; it <= kMaxIters; ++it) {
        PowerMinResult pm = power_min(h, tau, s);
        if (!std::isfinite(pm.total_power)) {
            throw NumericalError("solve_subp1: non-finite power at iteration " + std::to_string(it));
        }
        beta = scale_to_budget(pm.beta, h, p_max);
        const double tau_next = min_avg_throughput(s, beta);
        res.trace.push_back({tau_next, pm.total_power, p_max / pm.total_power});

        const bool budget_met = std::abs(pm.total_power - p_max) <= s.eps_power * p_max;
        const bool stalled = (tau_next - tau) <= s.eps_power * std::max(tau, 1e-12);
        tau = tau_next;
        if (budget_met || stalled) break;
    }

    res.beta = std::move(beta);
    res.tau = tau;
    return res;
}

}  // namespace uavopt
