#include "apglab/dp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace apglab {

namespace {

// P^pi(s, s') = sum_a pi(a|s) P(s'|s, a)
Eigen::MatrixXd policy_kernel(const Mdp& mdp, const PolicyMatrix& pi) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_states);
    for (int a = 0; a < mdp.n_actions; ++a) {
        out.noalias() += pi.col(a).asDiagonal() * mdp.transition[a];
    }
    return out;
}

}  // namespace

PolicyMatrix softmax_policy(const ParamMatrix& theta) {
    if (!theta.allFinite()) throw NumericError("softmax_policy: non-finite logits");
    PolicyMatrix pi(theta.rows(), theta.cols());
    for (Eigen::Index s = 0; s < theta.rows(); ++s) {
        const double m = theta.row(s).maxCoeff();
        pi.row(s) = (theta.row(s).array() - m).exp();
        pi.row(s) /= pi.row(s).sum();
    }
    return pi;
}

Eigen::VectorXd state_values(const Mdp& mdp, const PolicyMatrix& pi) {
    const Eigen::VectorXd r_pi = (pi.array() * mdp.reward.array()).rowwise().sum();
    if (mdp.gamma == 0.0) return r_pi;
    const Eigen::MatrixXd p_pi = policy_kernel(mdp, pi);
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(mdp.n_states, mdp.n_states);
    system.noalias() -= mdp.gamma * p_pi;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    Eigen::VectorXd v = lu.solve(r_pi);
    const double residual = (v - r_pi - mdp.gamma * p_pi * v).lpNorm<Eigen::Infinity>();
    if (!(residual < 1e-10)) {
        std::ostringstream os;
        os << "state_values: Bellman residual " << residual;
        throw NumericError(os.str());
    }
    return v;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> q_and_advantage(const Mdp& mdp,
                                                            const PolicyMatrix& /*pi*/,
                                                            const Eigen::VectorXd& v) {
    Eigen::MatrixXd q = mdp.reward;
    if (mdp.gamma != 0.0) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            q.col(a).noalias() += mdp.gamma * (mdp.transition[a] * v);
        }
    }
    Eigen::MatrixXd adv = q.colwise() - v;
    return {std::move(q), std::move(adv)};
}

Eigen::VectorXd visitation(const Mdp& mdp, const PolicyMatrix& pi,
                           const Eigen::VectorXd& start_dist) {
    if (mdp.gamma == 0.0) return start_dist;
    const Eigen::MatrixXd p_pi = policy_kernel(mdp, pi);
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(mdp.n_states, mdp.n_states);
    system.noalias() -= mdp.gamma * p_pi.transpose();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    Eigen::VectorXd d = lu.solve((1.0 - mdp.gamma) * start_dist);
    if (!d.allFinite()) throw NumericError("visitation: solver failure");
    return d;
}

ValueBundle evaluate_policy(const Mdp& mdp, const PolicyMatrix& pi) {
    ValueBundle out;
    const Eigen::VectorXd r_pi = (pi.array() * mdp.reward.array()).rowwise().sum();
    if (mdp.gamma == 0.0) {
        out.v = r_pi;
        out.d_mu = mdp.mu;
    } else {
        // One factorization serves both linear systems: V uses M, d uses M^T.
        const Eigen::MatrixXd p_pi = policy_kernel(mdp, pi);
        Eigen::MatrixXd system = Eigen::MatrixXd::Identity(mdp.n_states, mdp.n_states);
        system.noalias() -= mdp.gamma * p_pi;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
        out.v = lu.solve(r_pi);
        out.d_mu = lu.transpose().solve((1.0 - mdp.gamma) * mdp.mu);
        if (!out.v.allFinite() || !out.d_mu.allFinite()) {
            throw NumericError("evaluate_policy: solver failure");
        }
    }
    std::tie(out.q, out.adv) = q_and_advantage(mdp, pi, out.v);
    return out;
}

double objective(const Mdp& mdp, const ParamMatrix& theta, const Eigen::VectorXd& dist) {
    return state_values(mdp, softmax_policy(theta)).dot(dist);
}

std::pair<ParamMatrix, ValueBundle> policy_gradient_with_bundle(const Mdp& mdp,
                                                                const ParamMatrix& theta,
                                                                const Eigen::VectorXd& mu) {
    const PolicyMatrix pi = softmax_policy(theta);
    ValueBundle bundle;
    const Eigen::VectorXd r_pi = (pi.array() * mdp.reward.array()).rowwise().sum();
    if (mdp.gamma == 0.0) {
        bundle.v = r_pi;
        bundle.d_mu = mu;
    } else {
        const Eigen::MatrixXd p_pi = policy_kernel(mdp, pi);
        Eigen::MatrixXd system = Eigen::MatrixXd::Identity(mdp.n_states, mdp.n_states);
        system.noalias() -= mdp.gamma * p_pi;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
        bundle.v = lu.solve(r_pi);
        bundle.d_mu = lu.transpose().solve((1.0 - mdp.gamma) * mu);
    }
    std::tie(bundle.q, bundle.adv) = q_and_advantage(mdp, pi, bundle.v);
    ParamMatrix grad =
        (bundle.d_mu.asDiagonal() * (pi.array() * bundle.adv.array()).matrix()) /
        (1.0 - mdp.gamma);
    return {std::move(grad), std::move(bundle)};
}

ParamMatrix policy_gradient(const Mdp& mdp, const ParamMatrix& theta,
                            const Eigen::VectorXd& mu) {
    return policy_gradient_with_bundle(mdp, theta, mu).first;
}

OptimalSolution optimal_solution(const Mdp& mdp, double tol) {
    if (!(tol > 0.0)) throw ValidationError("optimal_solution: tol must be > 0");
    OptimalSolution out;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(mdp.n_states);
    Eigen::MatrixXd q(mdp.n_states, mdp.n_actions);
    // Residual contraction: gamma^k spans the gap, so cap iterations generously.
    const long max_iters = mdp.gamma == 0.0 ? 2 : 20 + static_cast<long>(
        std::ceil(std::log(tol * (1.0 - mdp.gamma)) / std::log(mdp.gamma)));
    double residual = std::numeric_limits<double>::infinity();
    for (long it = 0; it < max_iters && residual >= tol; ++it) {
        q = mdp.reward;
        for (int a = 0; a < mdp.n_actions; ++a) {
            q.col(a).noalias() += mdp.gamma * (mdp.transition[a] * v);
        }
        Eigen::VectorXd v_next = q.rowwise().maxCoeff();
        residual = (v_next - v).lpNorm<Eigen::Infinity>();
        v = std::move(v_next);
    }
    if (!(residual < tol)) throw NumericError("optimal_solution: value iteration stalled");

    out.a_star.resize(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
        int best = 0;
        for (int a = 1; a < mdp.n_actions; ++a) {
            if (q(s, a) > q(s, best)) best = a;
        }
        out.a_star[s] = best;
    }

    // Refine by exact evaluation of the greedy policy so that
    // V*(s) = Q*(s, a*(s)) holds to solver precision, not tol.
    PolicyMatrix greedy = PolicyMatrix::Zero(mdp.n_states, mdp.n_actions);
    for (int s = 0; s < mdp.n_states; ++s) greedy(s, out.a_star[s]) = 1.0;
    out.v_star = state_values(mdp, greedy);
    std::tie(out.q_star, std::ignore) = q_and_advantage(mdp, greedy, out.v_star);

    out.a2_q.resize(mdp.n_states);
    constexpr double kTieTol = 1e-9;
    for (int s = 0; s < mdp.n_states; ++s) {
        const int best = out.a_star[s];
        double second = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < mdp.n_actions; ++a) {
            if (a != best) second = std::max(second, out.q_star(s, a));
        }
        if (out.q_star(s, best) - second < kTieTol) {
            throw ValidationError("optimal action tied at state " + std::to_string(s) +
                                  " (unique-optimum assumption violated)");
        }
        out.a2_q[s] = second;
    }
    return out;
}

std::pair<double, double> performance_difference(const Mdp& mdp, const PolicyMatrix& pi,
                                                 const PolicyMatrix& pi_prime,
                                                 const Eigen::VectorXd& dist) {
    const Eigen::VectorXd v = state_values(mdp, pi);
    const Eigen::VectorXd v_prime = state_values(mdp, pi_prime);
    const double lhs = dist.dot(v - v_prime);

    const auto [q_prime, adv_prime] = q_and_advantage(mdp, pi_prime, v_prime);
    const Eigen::VectorXd d = visitation(mdp, pi, dist);
    const double rhs =
        d.dot((pi.array() * adv_prime.array()).rowwise().sum().matrix()) / (1.0 - mdp.gamma);
    return {lhs, rhs};
}

double c_infinity_exact(const Mdp& mdp) {
    if (mdp.gamma == 0.0) return 1.0;  // d == mu for every policy
    double worst = 1.0;
    for (int target = 0; target < mdp.n_states; ++target) {
        // max_pi d^pi_mu(target) = (1-gamma) * optimal value under indicator reward
        Eigen::VectorXd v = Eigen::VectorXd::Zero(mdp.n_states);
        double residual = 1.0;
        while (residual > 1e-14) {
            Eigen::VectorXd v_next(mdp.n_states);
            for (int s = 0; s < mdp.n_states; ++s) {
                double best = -std::numeric_limits<double>::infinity();
                for (int a = 0; a < mdp.n_actions; ++a) {
                    best = std::max(best, mdp.gamma * mdp.transition[a].row(s).dot(v));
                }
                v_next[s] = (s == target ? 1.0 : 0.0) + best;
            }
            residual = (v_next - v).lpNorm<Eigen::Infinity>();
            v = std::move(v_next);
        }
        const double max_d = (1.0 - mdp.gamma) * mdp.mu.dot(v);
        worst = std::max(worst, max_d / mdp.mu[target]);
    }
    return worst;
}

double c_infinity_surrogate(const Mdp& mdp) { return 1.0 / mdp.mu.minCoeff(); }

}  // namespace apglab
