#pragma once

// Test-only reference computations, kept independent of the library's solve
// paths on purpose: values come from truncated power series and finite
// differences, never from the dense linear solves they check.

#include <cmath>
#include <functional>

#include "apglab/dp.hpp"
#include "apglab/mdp.hpp"

namespace apglab::testing {

inline Eigen::MatrixXd policy_kernel_ref(const Mdp& mdp, const PolicyMatrix& pi) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            out.row(s) += pi(s, a) * mdp.transition[a].row(s);
        }
    }
    return out;
}

// V as the truncated series sum_{t<=T} gamma^t (P^pi)^t r^pi with
// T = ceil(log(tail) / log(gamma)).
inline Eigen::VectorXd truncated_state_values(const Mdp& mdp, const PolicyMatrix& pi,
                                              double tail = 1e-10) {
    Eigen::VectorXd r_pi = (pi.array() * mdp.reward.array()).rowwise().sum();
    if (mdp.gamma == 0.0) return r_pi;
    const long horizon =
        static_cast<long>(std::ceil(std::log(tail) / std::log(mdp.gamma)));
    const Eigen::MatrixXd p_pi = policy_kernel_ref(mdp, pi);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(mdp.n_states);
    Eigen::VectorXd term = r_pi;
    for (long t = 0; t <= horizon; ++t) {
        v += term;
        term = mdp.gamma * (p_pi * term);
    }
    return v;
}

// d as (1-gamma) sum_{t<=T} gamma^t ((P^pi)^T)^t start.
inline Eigen::VectorXd truncated_visitation(const Mdp& mdp, const PolicyMatrix& pi,
                                            const Eigen::VectorXd& start,
                                            double tail = 1e-10) {
    if (mdp.gamma == 0.0) return start;
    const long horizon =
        static_cast<long>(std::ceil(std::log(tail) / std::log(mdp.gamma)));
    const Eigen::MatrixXd p_pi_t = policy_kernel_ref(mdp, pi).transpose();
    Eigen::VectorXd d = Eigen::VectorXd::Zero(mdp.n_states);
    Eigen::VectorXd term = start;
    for (long t = 0; t <= horizon; ++t) {
        d += term;
        term = mdp.gamma * (p_pi_t * term);
    }
    return (1.0 - mdp.gamma) * d;
}

// Central finite differences of theta -> objective(theta, dist).
inline Eigen::MatrixXd fd_gradient(const Mdp& mdp, const ParamMatrix& theta,
                                   const Eigen::VectorXd& dist, double h = 1e-5) {
    Eigen::MatrixXd grad(theta.rows(), theta.cols());
    ParamMatrix probe = theta;
    for (Eigen::Index s = 0; s < theta.rows(); ++s) {
        for (Eigen::Index a = 0; a < theta.cols(); ++a) {
            probe(s, a) = theta(s, a) + h;
            const double up = objective(mdp, probe, dist);
            probe(s, a) = theta(s, a) - h;
            const double down = objective(mdp, probe, dist);
            probe(s, a) = theta(s, a);
            grad(s, a) = (up - down) / (2.0 * h);
        }
    }
    return grad;
}

// Central finite-difference Hessian of a scalar function of two variables.
inline Eigen::Matrix2d fd_hessian2(const std::function<double(double, double)>& f,
                                   double x, double y, double h = 1e-4) {
    Eigen::Matrix2d hess;
    hess(0, 0) = (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
    hess(1, 1) = (f(x, y + h) - 2.0 * f(x, y) + f(x, y - h)) / (h * h);
    const double mixed =
        (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) /
        (4.0 * h * h);
    hess(0, 1) = hess(1, 0) = mixed;
    return hess;
}

}  // namespace apglab::testing
