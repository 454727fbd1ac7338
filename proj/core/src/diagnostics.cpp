#include "apglab/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace apglab {

bool in_feasible_domain(const ParamMatrix& d, const std::vector<int>& a_star) {
    if (static_cast<std::size_t>(d.rows()) != a_star.size()) {
        throw ValidationError("in_feasible_domain: direction rows do not match a_star");
    }
    for (Eigen::Index s = 0; s < d.rows(); ++s) {
        const double best = d(s, a_star[s]);
        for (Eigen::Index a = 0; a < d.cols(); ++a) {
            if (a == a_star[s]) continue;
            if (!(best > d(s, a))) return false;
        }
    }
    return true;
}

double m_c_threshold(double concavity_c, const Mdp& mdp) {
    if (!(concavity_c > 1.0)) throw ValidationError("m_c_threshold: C must exceed 1");
    const double g = 1.0 - mdp.gamma;
    const double s = static_cast<double>(mdp.n_states);
    const double a = static_cast<double>(mdp.n_actions);
    return std::log(s * a * a / ((concavity_c - 1.0) * g * g * mdp.mu.minCoeff()));
}

double m_d_threshold(const ParamMatrix& d, const std::vector<int>& a_star) {
    if (!in_feasible_domain(d, a_star)) {
        throw ValidationError("m_d_threshold: direction is not in the feasible domain");
    }
    const double n_actions = static_cast<double>(d.cols());
    for (Eigen::Index s = 0; s < d.rows(); ++s) {
        if (std::abs(d.row(s).norm() - 1.0) > 1e-9) {
            throw ValidationError("m_d_threshold: per-state rows must have unit norm");
        }
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index s = 0; s < d.rows(); ++s) {
        for (Eigen::Index a = 0; a < d.cols(); ++a) {
            if (a == a_star[s]) continue;
            const double gap = d(s, a_star[s]) - d(s, a);
            worst = std::max(worst, std::log(2.0 * (n_actions - 1.0)) - std::log(gap));
        }
    }
    return 2.0 * worst;
}

double m_cd_threshold(double concavity_c, const Mdp& mdp, const ParamMatrix& d,
                      const std::vector<int>& a_star) {
    return std::max(m_d_threshold(d, a_star), m_c_threshold(concavity_c, mdp));
}

std::vector<double> default_step_grid() {
    std::vector<double> grid(16);
    for (int i = 0; i < 16; ++i) {
        grid[i] = std::pow(10.0, -3.0 + 3.0 * i / 15.0);
    }
    return grid;
}

ConcavityReport near_concavity_violation(const Mdp& mdp, const Eigen::VectorXd& mu,
                                         const ParamMatrix& theta, const ParamMatrix& d,
                                         double concavity_c,
                                         const std::vector<double>& k_grid,
                                         const std::vector<int>* a_star) {
    ConcavityReport report;
    report.c_value = concavity_c;
    report.direction = d;
    report.threshold_m = std::numeric_limits<double>::quiet_NaN();
    report.theta_gap_ok = false;

    Mdp probe = mdp;
    probe.mu = mu;
    const auto [grad, bundle] = policy_gradient_with_bundle(probe, theta, mu);
    const double f0 = bundle.v.dot(mu);
    const double inner = (grad.array() * d.array()).sum();

    report.max_violation = -std::numeric_limits<double>::infinity();
    for (double k : k_grid) {
        if (!(k > 0.0)) throw ValidationError("near_concavity_violation: steps must be > 0");
        const double f_k = objective(probe, theta + k * d, mu);
        const double violation = f_k - f0 - concavity_c * k * inner;
        if (violation > report.max_violation) {
            report.max_violation = violation;
            report.worst_step = k;
        }
    }

    if (a_star != nullptr) {
        report.threshold_m = m_cd_threshold(concavity_c, probe, d, *a_star);
        double min_gap = std::numeric_limits<double>::infinity();
        for (Eigen::Index s = 0; s < theta.rows(); ++s) {
            for (Eigen::Index a = 0; a < theta.cols(); ++a) {
                if (a == (*a_star)[s]) continue;
                min_gap = std::min(min_gap, theta(s, (*a_star)[s]) - theta(s, a));
            }
        }
        report.theta_gap_ok = min_gap > report.threshold_m;
    }
    return report;
}

ConditionFlags concavity_conditions(const OptimizerState& state, const Mdp& mdp,
                                    const OptimalSolution& opt, double margin_m) {
    ConditionFlags flags;

    // (i) theta gap to the optimal action exceeds M everywhere
    flags.cond_i = true;
    for (int s = 0; s < mdp.n_states; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            if (a == opt.a_star[s]) continue;
            if (!(state.theta(s, opt.a_star[s]) - state.theta(s, a) > margin_m)) {
                flags.cond_i = false;
                break;
            }
        }
        if (!flags.cond_i) break;
    }

    // (ii) V(s) > Q*(s, a2(s))
    const Eigen::VectorXd v = state_values(mdp, softmax_policy(state.theta));
    flags.cond_ii = true;
    for (int s = 0; s < mdp.n_states; ++s) {
        if (!(v[s] > opt.a2_q[s])) {
            flags.cond_ii = false;
            break;
        }
    }

    // (iii) gradient at omega is positive exactly at optimal actions
    const ParamMatrix grad = policy_gradient(mdp, state.omega, mdp.mu);
    flags.cond_iii = true;
    for (int s = 0; s < mdp.n_states && flags.cond_iii; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            const bool is_best = a == opt.a_star[s];
            if (is_best ? !(grad(s, a) > 0.0) : !(grad(s, a) < 0.0)) {
                flags.cond_iii = false;
                break;
            }
        }
    }

    // (iv) omega - theta largest at the optimal action (ties allowed)
    flags.cond_iv = true;
    for (int s = 0; s < mdp.n_states && flags.cond_iv; ++s) {
        const double best = state.omega(s, opt.a_star[s]) - state.theta(s, opt.a_star[s]);
        for (int a = 0; a < mdp.n_actions; ++a) {
            if (!(best >= state.omega(s, a) - state.theta(s, a))) {
                flags.cond_iv = false;
                break;
            }
        }
    }
    return flags;
}

std::vector<std::pair<double, double>> one_step_decomposition(const RunTrace& trace) {
    std::vector<std::pair<double, double>> out;
    out.reserve(trace.records.size());
    for (const auto& r : trace.records) {
        out.emplace_back(r.mom_improve, r.grad_improve);
    }
    return out;
}

std::pair<double, double> bandit_hessian_eigs(double p_star) {
    if (!(p_star > 0.0 && p_star < 1.0)) {
        throw ValidationError("bandit_hessian_eigs: p must lie in (0, 1)");
    }
    return {2.0 * p_star * (1.0 - p_star) * (1.0 - 2.0 * p_star), 0.0};
}

namespace {

struct FitData {
    std::vector<double> x;
    std::vector<double> y;
};

FitData window_points(const RunTrace& trace, long t_min, long t_max, bool log_t,
                      const char* who) {
    FitData data;
    for (const auto& r : trace.records) {
        if (r.t < t_min || r.t > t_max || r.t < 1) continue;
        if (!(r.gap_rho > 0.0)) {
            throw NumericError(std::string(who) +
                               ": non-positive gap in window; shrink the window");
        }
        data.x.push_back(log_t ? std::log(static_cast<double>(r.t))
                               : static_cast<double>(r.t));
        data.y.push_back(std::log(r.gap_rho));
    }
    if (data.x.size() < 20) {
        throw ValidationError(std::string(who) + ": window needs >= 20 logged points, got " +
                              std::to_string(data.x.size()));
    }
    return data;
}

// slope and Pearson correlation of a least-squares line
std::pair<double, double> least_squares(const FitData& d) {
    const double n = static_cast<double>(d.x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        sx += d.x[i];
        sy += d.y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        const double dx = d.x[i] - mx, dy = d.y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double slope = sxy / sxx;
    const double corr = sxy / std::sqrt(sxx * syy);
    return {slope, corr};
}

}  // namespace

double loglog_slope(const RunTrace& trace, long t_min, long t_max) {
    const FitData data = window_points(trace, t_min, t_max, true, "loglog_slope");
    FitData neg = data;
    for (auto& y : neg.y) y = -y;
    return least_squares(neg).first;
}

std::pair<double, double> linear_rate_fit(const RunTrace& trace, long t_min, long t_max) {
    const FitData data = window_points(trace, t_min, t_max, false, "linear_rate_fit");
    return least_squares(data);
}

}  // namespace apglab
