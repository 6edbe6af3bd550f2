// SPDX-License-Identifier: Apache-2.0
#include "uavopt/trajectory.hpp"

#include <atomic>
#include <cmath>
#include <string>

namespace uavopt {

namespace {

std::atomic<std::uint64_t> g_factorizations{0};

Eigen::VectorXd flatten(const Trajectory& q) {
    return Eigen::Map<const Eigen::VectorXd>(q.pts.data(), q.pts.size());
}

Trajectory unflatten(const Eigen::VectorXd& v) {
    Trajectory q;
    q.pts = Eigen::Map<const Eigen::Matrix2Xd>(v.data(), 2, v.size() / 2);
    return q;
}

Eigen::Vector2d project_ball(const Eigen::Vector2d& x, double radius) {
    const double norm = x.norm();
    if (norm <= radius || norm == 0.0) return x;
    return x * (radius / norm);
}

}  // namespace

DifferenceOperator::DifferenceOperator(int n, double rho1, double rho2)
    : n_(n), rho1_(rho1), rho2_(rho2) {
    if (n < 2) throw ValidationError("difference operator needs n >= 2, got " + std::to_string(n));
    if (!(rho1 > 0.0) || !(rho2 >= 0.0)) {
        throw ValidationError("difference operator needs rho1 > 0 and rho2 >= 0");
    }
    // D0^T D0 stencil: 2 on the diagonal, -1 on the cyclic neighbours.
    // n = 2 is the degenerate wrap where both hops join the same pair.
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = 2.0;
        const int j = (i + 1) % n;
        m(i, j) -= 1.0;
        m(j, i) -= 1.0;
    }
    m = rho1 * Eigen::MatrixXd::Identity(n, n) + rho2 * m;
    llt_.compute(m);
    if (llt_.info() != Eigen::Success) {
        throw NumericalError("difference operator factorization failed");
    }
    g_factorizations.fetch_add(1, std::memory_order_relaxed);
}

Eigen::VectorXd DifferenceOperator::apply(const Eigen::VectorXd& q) const {
    Eigen::VectorXd out(2 * n_);
    for (int i = 0; i < n_; ++i) {
        const int j = (i + 1) % n_;
        out.segment<2>(2 * i) = q.segment<2>(2 * i) - q.segment<2>(2 * j);
    }
    return out;
}

Eigen::VectorXd DifferenceOperator::apply_transpose(const Eigen::VectorXd& z) const {
    Eigen::VectorXd out(2 * n_);
    for (int i = 0; i < n_; ++i) {
        const int p = (i + n_ - 1) % n_;
        out.segment<2>(2 * i) = z.segment<2>(2 * i) - z.segment<2>(2 * p);
    }
    return out;
}

Eigen::VectorXd DifferenceOperator::solve(const Eigen::VectorXd& rhs) const {
    using Stride = Eigen::InnerStride<2>;
    Eigen::VectorXd out(2 * n_);
    for (int c = 0; c < 2; ++c) {
        Eigen::Map<const Eigen::VectorXd, 0, Stride> in(rhs.data() + c, n_);
        Eigen::Map<Eigen::VectorXd, 0, Stride>(out.data() + c, n_) = llt_.solve(in);
    }
    return out;
}

DifferenceOperator build_operator(int n, double rho1, double rho2) {
    return DifferenceOperator(n, rho1, rho2);
}

std::uint64_t factorization_count() { return g_factorizations.load(std::memory_order_relaxed); }

Eigen::VectorXd q_update(const AdmmState& st, const DifferenceOperator& op) {
    return op.solve(st.rho2 * op.apply_transpose(st.z - st.y) + st.rho1 * (st.m - st.t));
}

Eigen::VectorXd z_update(const AdmmState& st, double s_max) {
    const int n = static_cast<int>(st.q.size()) / 2;
    Eigen::VectorXd z(2 * n);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const Eigen::Vector2d x =
            st.q.segment<2>(2 * i) - st.q.segment<2>(2 * j) + st.y.segment<2>(2 * i);
        z.segment<2>(2 * i) = project_ball(x, s_max);
    }
    return z;
}

Eigen::VectorXd m_update(const AdmmState& st, const BetaAllocation& beta, const Scenario& s) {
    const int n = static_cast<int>(st.q.size()) / 2;
    const int num_users = static_cast<int>(beta.rows());
    Eigen::VectorXd m(2 * n);
    for (int i = 0; i < n; ++i) {
        const double a = beta.col(i).sum();
        Eigen::Vector2d w_hat = Eigen::Vector2d::Zero();
        for (int k = 0; k < num_users; ++k) w_hat += beta(k, i) * s.users[k];
        const Eigen::Vector2d b = st.q.segment<2>(2 * i) + st.t.segment<2>(2 * i);
        m.segment<2>(2 * i) = (st.rho1 * b + w_hat) / (st.rho1 + a);
    }
    return m;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> dual_update(const AdmmState& st,
                                                        const DifferenceOperator& op) {
    return {st.t + st.q - st.m, st.y + op.apply(st.q) - st.z};
}

void clamp_hops(Trajectory& q, double s_max) {
    const int n = q.num_points();
    auto clamp_one = [&](int from, int to) {
        const Eigen::Vector2d a = q.pts.col(from);
        Eigen::Vector2d d = q.pts.col(to) - a;
        double len = d.norm();
        if (len <= s_max) return true;
        d *= s_max / len;
        for (int g = 0; g < 16 && d.norm() > s_max; ++g) d *= (1.0 - 4e-16);
        q.pts.col(to) = a + d;
        return false;
    };

    for (int sweep = 0; sweep < n; ++sweep) {
        bool feasible = true;
        for (int i = 0; i < n; ++i) feasible = clamp_one(i, (i + 1) % n) && feasible;
        if (feasible) return;
    }

    // Sequential sweeps can chase their own tail on gross violations;
    // contracting about the centroid shortens every hop uniformly.
    const Eigen::Vector2d c = q.pts.rowwise().mean();
    for (int g = 0; g < 64; ++g) {
        const double worst = q.max_hop();
        if (worst <= s_max) return;
        const double f = (s_max / worst) * (1.0 - 1e-12);
        q.pts = ((q.pts.colwise() - c) * f).colwise() + c;
    }
    throw NumericalError("clamp_hops: could not restore hop feasibility");
}

double trajectory_objective(const BetaAllocation& beta, const Scenario& s, const Trajectory& q) {
    double obj = 0.0;
    for (int k = 0; k < static_cast<int>(beta.rows()); ++k) {
        for (int n = 0; n < static_cast<int>(beta.cols()); ++n) {
            obj += beta(k, n) * (q.pts.col(n) - s.users[k]).squaredNorm();
        }
    }
    return obj;
}

Subp2Result solve_subp2(const Trajectory& q_init, const BetaAllocation& beta, const Scenario& s) {
    if (beta.size() == 0 || beta.maxCoeff() <= 0.0) {
        return {q_init, {{}, {}, 0, true}};  // objective is identically zero
    }
    DifferenceOperator op = build_operator(s.num_slots, s.rho1, s.rho2);
    return solve_subp2(q_init, beta, s, op);
}

Subp2Result solve_subp2(const Trajectory& q_init, const BetaAllocation& beta, const Scenario& s,
                        const DifferenceOperator& op) {
    const int n = s.num_slots;
    const double s_max = s.s_max();
    if (beta.size() == 0 || beta.maxCoeff() <= 0.0) {
        return {q_init, {{}, {}, 0, true}};
    }

    AdmmState st;
    st.rho1 = s.rho1;
    st.rho2 = s.rho2;
    st.q = flatten(q_init);
    st.m = st.q;
    st.z = op.apply(st.q);
    for (int i = 0; i < n; ++i) {
        st.z.segment<2>(2 * i) = project_ball(st.z.segment<2>(2 * i), s_max);
    }
    st.t = Eigen::VectorXd::Zero(2 * n);
    st.y = Eigen::VectorXd::Zero(2 * n);

    const double threshold = s.tol_admm * std::sqrt(2.0 * n);
    bool converged = false;

    for (int j = 0; j < s.max_admm_iters; ++j) {
        const Eigen::VectorXd m_old = st.m;
        const Eigen::VectorXd z_old = st.z;

        const Eigen::VectorXd q_new = q_update(st, op);
        if (s.admm_z_uses_stale_q) {
            st.z = z_update(st, s_max);  // projections read the previous q
            st.q = q_new;
        } else {
            st.q = q_new;
            st.z = z_update(st, s_max);
        }
        st.m = m_update(st, beta, s);
        auto [t_new, y_new] = dual_update(st, op);
        st.t = std::move(t_new);
        st.y = std::move(y_new);

        const double primal = (st.q - st.m).norm() + (op.apply(st.q) - st.z).norm();
        const double dual =
            st.rho1 * (st.m - m_old).norm() + st.rho2 * op.apply_transpose(st.z - z_old).norm();
        if (!std::isfinite(primal) || !std::isfinite(dual)) {
            throw NumericalError("solve_subp2: non-finite residual at ADMM iteration " +
                                 std::to_string(j + 1));
        }
        st.primal_residuals.push_back(primal);
        st.dual_residuals.push_back(dual);
        st.iter = j + 1;
        if (std::max(primal, dual) <= threshold) {
            converged = true;
            break;
        }
    }

    Trajectory out = unflatten(st.m);
    clamp_hops(out, s_max);
    // The consensus copy can lag on an iteration-cap exit; never hand back
    // something worse than the warm start.
    if (trajectory_objective(beta, s, out) > trajectory_objective(beta, s, q_init)) {
        out = q_init;
    }
    return {std::move(out),
            {std::move(st.primal_residuals), std::move(st.dual_residuals), st.iter, converged}};
}

}  // namespace uavopt
