#pragma once

#include <utility>

#include "apglab/mdp.hpp"

namespace apglab {

/// Softmax policy of a logit table; rows sum to 1 and are invariant to
/// adding a per-state constant. Throws NumericError on non-finite input.
PolicyMatrix softmax_policy(const ParamMatrix& theta);

/// V^pi from the Bellman consistency system (I - gamma P^pi) V = r^pi,
/// solved densely. The residual is checked to 1e-10.
Eigen::VectorXd state_values(const Mdp& mdp, const PolicyMatrix& pi);

/// Q(s,a) = r(s,a) + gamma sum_s' P(s'|s,a) V(s') and A = Q - V.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> q_and_advantage(const Mdp& mdp,
                                                            const PolicyMatrix& pi,
                                                            const Eigen::VectorXd& v);

/// Discounted state visitation distribution:
/// d = (1-gamma) start + gamma (P^pi)^T d.
Eigen::VectorXd visitation(const Mdp& mdp, const PolicyMatrix& pi,
                           const Eigen::VectorXd& start_dist);

/// Everything one policy evaluation produces.
struct ValueBundle {
    Eigen::VectorXd v;
    Eigen::MatrixXd q;
    Eigen::MatrixXd adv;
    Eigen::VectorXd d_mu;  // visitation under mdp.mu
};

ValueBundle evaluate_policy(const Mdp& mdp, const PolicyMatrix& pi);

/// dist-weighted objective sum_s dist(s) V^{pi_theta}(s).
double objective(const Mdp& mdp, const ParamMatrix& theta, const Eigen::VectorXd& dist);

/// Exact softmax policy gradient of theta -> V^{pi_theta}(mu):
/// grad(s,a) = d_mu(s) pi(a|s) A(s,a) / (1-gamma).
ParamMatrix policy_gradient(const Mdp& mdp, const ParamMatrix& theta,
                            const Eigen::VectorXd& mu);

/// Gradient plus the bundle it was computed from (saves re-solving when the
/// caller also needs values).
std::pair<ParamMatrix, ValueBundle> policy_gradient_with_bundle(const Mdp& mdp,
                                                                const ParamMatrix& theta,
                                                                const Eigen::VectorXd& mu);

struct OptimalSolution {
    Eigen::VectorXd v_star;
    Eigen::MatrixXd q_star;
    std::vector<int> a_star;   // unique optimal action per state
    Eigen::VectorXd a2_q;      // second-best Q*(s, a_2(s))
};

/// Value iteration to Bellman residual < tol. Throws ValidationError when a
/// state's optimal action is tied within 1e-9 (unique-optimum assumption).
OptimalSolution optimal_solution(const Mdp& mdp, double tol = 1e-12);

/// Both sides of the performance difference identity
///   V^pi(dist) - V^{pi'}(dist)
///     = 1/(1-gamma) sum_s d^pi_dist(s) sum_a pi(a|s) A^{pi'}(s,a).
/// Returns {lhs, rhs}; callers assert closeness.
std::pair<double, double> performance_difference(const Mdp& mdp, const PolicyMatrix& pi,
                                                 const PolicyMatrix& pi_prime,
                                                 const Eigen::VectorXd& dist);

/// max over states and policies of d^pi_mu(s) / mu(s), computed exactly by
/// running value iteration on the indicator-reward MDP of each state.
double c_infinity_exact(const Mdp& mdp);

/// The paper's closed-form bound 1 / min_s mu(s).
double c_infinity_surrogate(const Mdp& mdp);

}  // namespace apglab
