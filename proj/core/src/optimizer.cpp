#include "apglab/optimizer.hpp"

#include <cmath>

namespace apglab {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Pg: return "pg";
        case Algorithm::Apg: return "apg";
        case Algorithm::Napg: return "napg";
        case Algorithm::Hbpg: return "hbpg";
        case Algorithm::ApgClipped: return "apg-clip";
        case Algorithm::ApgNormalized: return "apg-norm";
        case Algorithm::Sapg: return "sapg";
        case Algorithm::GhadimiAg: return "ag";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "pg") return Algorithm::Pg;
    if (name == "apg") return Algorithm::Apg;
    if (name == "napg") return Algorithm::Napg;
    if (name == "hbpg") return Algorithm::Hbpg;
    if (name == "apg-clip") return Algorithm::ApgClipped;
    if (name == "apg-norm") return Algorithm::ApgNormalized;
    if (name == "sapg") return Algorithm::Sapg;
    if (name == "ag") return Algorithm::GhadimiAg;
    throw ValidationError(
        "unknown algorithm: " + name +
        " (valid: pg, apg, napg, hbpg, apg-clip, apg-norm, sapg, ag)");
}

OptimizerState OptimizerState::init(const ParamMatrix& theta0) {
    OptimizerState s;
    s.theta = theta0;
    s.omega = theta0;
    s.theta_prev = theta0;
    s.t = 0;
    s.restart_count = 0;
    return s;
}

StepInfo pg_step(OptimizerState& state, const Mdp& mdp, const StepSchedule& schedule) {
    const long t = state.t + 1;
    const ParamMatrix grad = policy_gradient(mdp, state.theta, mdp.mu);
    StepInfo info;
    info.eta = schedule.eta(t);
    info.grad_norm = grad.norm();
    state.theta_prev = state.theta;
    state.theta += info.eta * grad;
    state.omega = state.theta;
    state.t = t;
    return info;
}

namespace {

// Shared momentum + restart tail of the APG family. `theta_next` is the
// already-updated gradient iterate.
StepInfo nesterov_tail(OptimizerState& state, const Mdp& mdp, ParamMatrix theta_next,
                       double eta, double grad_norm, bool restart_enabled) {
    const long t = state.t + 1;
    const double momentum = static_cast<double>(t - 1) / static_cast<double>(t + 2);
    ParamMatrix phi = theta_next + momentum * (theta_next - state.theta);

    StepInfo info;
    info.eta = eta;
    info.grad_norm = grad_norm;
    if (restart_enabled) {
        // Eq. (3): ties keep phi, so a restart happens only on strict decrease.
        const double v_phi = objective(mdp, phi, mdp.mu);
        const double v_theta = objective(mdp, theta_next, mdp.mu);
        if (v_phi >= v_theta) {
            state.omega = std::move(phi);
        } else {
            state.omega = theta_next;
            state.restart_count += 1;
            info.restarted = true;
        }
    } else {
        state.omega = std::move(phi);
    }
    state.theta_prev = state.theta;
    state.theta = std::move(theta_next);
    state.t = t;
    return info;
}

}  // namespace

StepInfo apg_step(OptimizerState& state, const Mdp& mdp, const StepSchedule& schedule) {
    const long t = state.t + 1;
    const double eta = schedule.eta(t);
    const ParamMatrix grad = policy_gradient(mdp, state.omega, mdp.mu);
    ParamMatrix theta_next = state.omega + eta * grad;
    return nesterov_tail(state, mdp, std::move(theta_next), eta, grad.norm(), true);
}

StepInfo napg_step(OptimizerState& state, const Mdp& mdp, const StepSchedule& schedule) {
    const long t = state.t + 1;
    const double eta = schedule.eta(t);
    const ParamMatrix grad = policy_gradient(mdp, state.omega, mdp.mu);
    ParamMatrix theta_next = state.omega + eta * grad;
    return nesterov_tail(state, mdp, std::move(theta_next), eta, grad.norm(), false);
}

StepInfo hbpg_step(OptimizerState& state, const Mdp& mdp, double eta, double beta_hb) {
    if (!(beta_hb >= 0.0 && beta_hb < 1.0)) {
        throw ValidationError("hbpg_step: momentum factor must lie in [0, 1)");
    }
    const ParamMatrix grad = policy_gradient(mdp, state.theta, mdp.mu);
    ParamMatrix theta_next = state.theta + eta * grad + beta_hb * (state.theta - state.theta_prev);
    StepInfo info;
    info.eta = eta;
    info.grad_norm = grad.norm();
    state.theta_prev = state.theta;
    state.theta = std::move(theta_next);
    state.omega = state.theta;
    state.t += 1;
    return info;
}

ParamMatrix clip_elementwise(const ParamMatrix& x, double clip_bound) {
    if (!(clip_bound > 0.0)) throw ValidationError("clip_elementwise: bound must be > 0");
    return x.cwiseMax(-clip_bound).cwiseMin(clip_bound);
}

StepInfo apg_clipped_step(OptimizerState& state, const Mdp& mdp,
                          const StepSchedule& schedule) {
    if (schedule.kind != ScheduleKind::ExponentialClipped) {
        throw ValidationError("apg_clipped_step requires an exponential_clipped schedule");
    }
    const long t = state.t + 1;
    const double eta = schedule.eta(t);
    const ParamMatrix grad = policy_gradient(mdp, state.omega, mdp.mu);
    ParamMatrix theta_next =
        state.omega + clip_elementwise(eta * grad, schedule.clip_bound);
    return nesterov_tail(state, mdp, std::move(theta_next), eta, grad.norm(), true);
}

StepInfo apg_normalized_step(OptimizerState& state, const Mdp& mdp,
                             const StepSchedule& schedule) {
    if (schedule.kind != ScheduleKind::Normalized) {
        throw ValidationError("apg_normalized_step requires a normalized schedule");
    }
    const ParamMatrix grad = policy_gradient(mdp, state.omega, mdp.mu);
    const double norm = grad.norm();
    if (!(norm > 1e-300)) {
        throw NumericError("apg_normalized_step: vanishing gradient");
    }
    const double eta = schedule.norm_const / norm;
    ParamMatrix theta_next = state.omega + eta * grad;
    return nesterov_tail(state, mdp, std::move(theta_next), eta, norm, true);
}

StepInfo sapg_step(OptimizerState& state, const Mdp& mdp, const StepSchedule& schedule,
                   Rng& rng, int batch_size) {
    if (batch_size < 1) throw ValidationError("sapg_step: batch_size must be >= 1");
    const long t = state.t + 1;
    const double eta = schedule.eta(t);

    const auto [grad, bundle] = policy_gradient_with_bundle(mdp, state.omega, mdp.mu);
    const PolicyMatrix pi = softmax_policy(state.omega);

    ParamMatrix stochastic = ParamMatrix::Zero(mdp.n_states, mdp.n_actions);
    for (int b = 0; b < batch_size; ++b) {
        const int s = rng.categorical(bundle.d_mu);
        const int a = rng.categorical(pi.row(s).transpose());
        stochastic(s, a) += grad(s, a);
    }

    ParamMatrix theta_next = state.omega + eta * stochastic;
    return nesterov_tail(state, mdp, std::move(theta_next), eta, stochastic.norm(), true);
}

StepInfo ghadimi_ag_step(OptimizerState& state, const Mdp& mdp, long t_shift,
                         double smoothness) {
    const long t = state.t + 1;
    const double alpha = 2.0 / static_cast<double>(t + 1 + t_shift);
    const double beta = static_cast<double>(t + t_shift) /
                        static_cast<double>(t + 1 + t_shift) / (2.0 * smoothness);
    const double lambda = beta / alpha;

    if (state.ag_hat.size() == 0) state.ag_hat = state.theta;

    // state.theta = theta_ag, state.omega = theta_md, state.ag_hat = theta_hat
    ParamMatrix theta_md = (1.0 - alpha) * state.theta + alpha * state.ag_hat;
    const ParamMatrix grad = policy_gradient(mdp, theta_md, mdp.mu);
    state.ag_hat += lambda * grad;
    ParamMatrix theta_ag = theta_md + beta * grad;

    StepInfo info;
    info.eta = beta;
    info.grad_norm = grad.norm();
    state.theta_prev = state.theta;
    state.theta = std::move(theta_ag);
    state.omega = std::move(theta_md);
    state.t = t;
    return info;
}

}  // namespace apglab
