#pragma once

#include <utility>
#include <vector>

#include "apglab/dp.hpp"
#include "apglab/mdp.hpp"
#include "apglab/trace.hpp"

namespace apglab {

/// True iff for every state the component at the optimal action strictly
/// dominates every other component of the update direction.
bool in_feasible_domain(const ParamMatrix& d, const std::vector<int>& a_star);

/// M_C = ln[ |S||A|^2 / ((C-1)(1-gamma)^2 min_s mu(s)) ]; requires C > 1.
double m_c_threshold(double concavity_c, const Mdp& mdp);

/// M_d = 2 max_{s, a != a*} { ln[2(|A|-1)] - ln[d(s,a*) - d(s,a)] } for a
/// direction with unit-norm per-state rows inside the feasible domain.
double m_d_threshold(const ParamMatrix& d, const std::vector<int>& a_star);

/// M_{C,d} = max(M_d, M_C).
double m_cd_threshold(double concavity_c, const Mdp& mdp, const ParamMatrix& d,
                      const std::vector<int>& a_star);

/// Result of probing f(theta + k d) <= f(theta) + C k <grad, d> on a step grid.
/// max_violation <= 0 means no violation was detected.
struct ConcavityReport {
    double c_value = 0.0;
    ParamMatrix direction;
    double max_violation = 0.0;
    double worst_step = 0.0;
    double threshold_m = 0.0;  // M_{C,d} when a_star is supplied, else NaN
    bool theta_gap_ok = false;
};

ConcavityReport near_concavity_violation(const Mdp& mdp, const Eigen::VectorXd& mu,
                                         const ParamMatrix& theta, const ParamMatrix& d,
                                         double concavity_c,
                                         const std::vector<double>& k_grid,
                                         const std::vector<int>* a_star = nullptr);

/// Geometric default grid 1e-3 .. 1, 16 points.
std::vector<double> default_step_grid();

/// The four structural conditions checked along a run:
///  (i)   every theta gap to the optimal action exceeds margin_m,
///  (ii)  V(s) beats the second-best optimal value Q*(s, a2(s)),
///  (iii) the gradient at omega is positive exactly on optimal actions,
///  (iv)  omega - theta is largest at the optimal action of every state.
struct ConditionFlags {
    bool cond_i = false;
    bool cond_ii = false;
    bool cond_iii = false;
    bool cond_iv = false;

    bool all() const { return cond_i && cond_ii && cond_iii && cond_iv; }
};

ConditionFlags concavity_conditions(const OptimizerState& state, const Mdp& mdp,
                                    const OptimalSolution& opt, double margin_m);

/// Splits each logged iteration's progress into the momentum part
/// V_rho(omega^t) - V_rho(theta^t) and the gradient part
/// V_rho(theta^t) - V_rho(omega^{t-1}); these are the mom/grad columns.
std::vector<std::pair<double, double>> one_step_decomposition(const RunTrace& trace);

/// Eigenvalues (2p(1-p)(1-2p), 0) of the two-armed-bandit objective Hessian
/// at pi(a*) = p_star.
std::pair<double, double> bandit_hessian_eigs(double p_star);

/// Least-squares slope of -log(gap_rho) against log(t) on records with
/// t in [t_min, t_max]; needs >= 20 points with positive gaps.
double loglog_slope(const RunTrace& trace, long t_min, long t_max);

/// Least-squares fit of log(gap_rho) against t on [t_min, t_max];
/// returns {slope, pearson correlation}.
std::pair<double, double> linear_rate_fit(const RunTrace& trace, long t_min, long t_max);

}  // namespace apglab
