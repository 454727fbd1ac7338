#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "apglab/mdp.hpp"

namespace apglab {

enum class ScheduleKind {
    NearlyConstantMdp,     // eta(t) = t/(t+1) * (1-gamma)^3 / 16
    NearlyConstantBandit,  // eta(t) = t/(t+1) * 1/5
    Constant,              // eta = 1/L
    ExponentialClipped,    // eta(t) = beta^t * (1-gamma)^3 / 8, update clipped to [-K, K]
    Normalized,            // eta(t) = const / ||grad||_2
};

std::string to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& name);

/// Step-size schedule shared by all optimizers. Construct through the
/// factories below; they pin the constants the convergence statements use.
struct StepSchedule {
    ScheduleKind kind = ScheduleKind::Constant;
    double gamma = 0.0;
    double smoothness = 0.0;   // L; eta = 1/L for Constant
    double growth_base = 0.0;  // beta for ExponentialClipped
    double clip_bound = 0.0;   // K for ExponentialClipped
    double c_inf = 0.0;        // visitation-ratio bound used by clipped/normalized
    double norm_const = 0.0;   // premultiplier of 1/||grad|| for Normalized

    double eta(long t) const;

    /// Largest admissible growth base exp((1-gamma) / (8 sqrt(A) S (4 c_inf - (1-gamma)))).
    static double max_growth_base(double gamma, double c_inf, int n_states, int n_actions);
};

/// eta(t) = t/(t+1) * (1-gamma)^3/16; the nearly constant MDP step.
StepSchedule nearly_constant_mdp(double gamma);

/// eta(t) = t/(t+1) * 1/5; the nearly constant bandit step.
StepSchedule nearly_constant_bandit();

/// eta = (1-gamma)^3/8, i.e. 1/L with L = 8/(1-gamma)^3.
StepSchedule constant_mdp(double gamma);

/// eta = 2/5, i.e. 1/L with L = 5/2.
StepSchedule constant_bandit();

/// eta(t) = beta^t (1-gamma)^3/8 with element-wise clipping at
/// K = (1-gamma) / (4 sqrt(A) S (4 c_inf - (1-gamma))) + 2 ln beta.
/// `beta <= 0` selects the default exp(0.9 ln beta_max); otherwise beta must
/// lie strictly inside (1, beta_max) or a ValidationError is thrown.
StepSchedule exponential_clipped(const Mdp& mdp, double c_inf, double beta = 0.0);

/// eta(t) = (1-gamma) / ((6(1-gamma) + 8(c_inf - (1-gamma))) sqrt(S)) / ||grad||.
StepSchedule normalized(const Mdp& mdp, double c_inf);

/// Natural default for an environment: nearly-constant bandit step for
/// one-state gamma=0 problems, nearly-constant MDP step otherwise.
StepSchedule default_schedule(const Mdp& mdp);

nlohmann::json schedule_to_json(const StepSchedule& s);
StepSchedule schedule_from_json(const nlohmann::json& j);

}  // namespace apglab
