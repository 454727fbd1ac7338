#pragma once

#include <optional>
#include <string>

#include "apglab/dp.hpp"
#include "apglab/mdp.hpp"
#include "apglab/schedule.hpp"

namespace apglab {

enum class Algorithm {
    Pg,
    Apg,
    Napg,
    Hbpg,
    ApgClipped,
    ApgNormalized,
    Sapg,
    GhadimiAg,
};

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

/// Iterate state shared by every optimizer in the family.
///
/// `t` counts completed iterations; a fresh state has t = 0 and
/// omega = theta_prev = theta. `ag_hat` is only used by the three-sequence
/// accelerated-gradient form.
struct OptimizerState {
    ParamMatrix theta;
    ParamMatrix omega;
    ParamMatrix theta_prev;
    long t = 0;
    long restart_count = 0;
    ParamMatrix ag_hat;

    static OptimizerState init(const ParamMatrix& theta0);
};

/// What a single step reports back to the run loop.
struct StepInfo {
    double eta = 0.0;
    double grad_norm = 0.0;
    bool restarted = false;
};

/// Vanilla ascent: theta <- theta + eta * grad at theta.
StepInfo pg_step(OptimizerState& state, const Mdp& mdp, const StepSchedule& schedule);

/// Nesterov step with monotone restart:
///   theta^(t)  <- omega^(t-1) + eta(t) grad at omega^(t-1)
///   phi^(t)    <- theta^(t) + (t-1)/(t+2) (theta^(t) - theta^(t-1))
///   omega^(t)  <- phi^(t) if V^{pi_phi}(mu) >= V^{pi_theta}(mu) else theta^(t)
/// Ties keep phi (no restart).
StepInfo apg_step(OptimizerState& state, const Mdp& mdp, const StepSchedule& schedule);

/// apg_step with the restart test removed: omega <- phi unconditionally.
StepInfo napg_step(OptimizerState& state, const Mdp& mdp, const StepSchedule& schedule);

/// Heavy-ball: theta <- theta + eta grad at theta + beta_hb (theta - theta_prev).
StepInfo hbpg_step(OptimizerState& state, const Mdp& mdp, double eta, double beta_hb);

/// Entrywise clip to [-clip_bound, clip_bound]; clip_bound must be > 0.
ParamMatrix clip_elementwise(const ParamMatrix& x, double clip_bound);

/// apg_step with the gradient term replaced by
/// clip_elementwise(eta(t) * grad, K); schedule must be ExponentialClipped.
StepInfo apg_clipped_step(OptimizerState& state, const Mdp& mdp, const StepSchedule& schedule);

/// apg_step with eta(t) = norm_const / ||grad||_2; throws NumericError when
/// the gradient norm underflows (the run loop treats that as converged).
StepInfo apg_normalized_step(OptimizerState& state, const Mdp& mdp,
                             const StepSchedule& schedule);

/// Stochastic APG: batch_size (s,a) pairs drawn from the exact visitation
/// distribution at omega and pi_omega; the stochastic gradient carries the
/// exact partial derivative on each sampled coordinate (duplicates summed)
/// and zeros elsewhere. Momentum and restart as in apg_step.
StepInfo sapg_step(OptimizerState& state, const Mdp& mdp, const StepSchedule& schedule,
                   Rng& rng, int batch_size);

/// Three-sequence accelerated-gradient form with
///   alpha(t) = 2/((t+1)+t_shift),
///   beta(t)  = (t+t_shift)/((t+1)+t_shift) * 1/(2L),
///   lambda(t)= beta(t)/alpha(t).
/// state.theta holds theta_ag, state.omega theta_md, state.ag_hat theta_hat.
StepInfo ghadimi_ag_step(OptimizerState& state, const Mdp& mdp, long t_shift,
                         double smoothness);

}  // namespace apglab
