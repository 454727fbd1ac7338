#include "apglab/schedule.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace apglab {

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::NearlyConstantMdp: return "nearly_constant_mdp";
        case ScheduleKind::NearlyConstantBandit: return "nearly_constant_bandit";
        case ScheduleKind::Constant: return "constant";
        case ScheduleKind::ExponentialClipped: return "exponential_clipped";
        case ScheduleKind::Normalized: return "normalized";
    }
    return "?";
}

ScheduleKind schedule_kind_from_string(const std::string& name) {
    if (name == "nearly_constant_mdp") return ScheduleKind::NearlyConstantMdp;
    if (name == "nearly_constant_bandit") return ScheduleKind::NearlyConstantBandit;
    if (name == "constant") return ScheduleKind::Constant;
    if (name == "exponential_clipped") return ScheduleKind::ExponentialClipped;
    if (name == "normalized") return ScheduleKind::Normalized;
    throw ValidationError("unknown schedule kind: " + name);
}

double StepSchedule::eta(long t) const {
    const double td = static_cast<double>(t);
    switch (kind) {
        case ScheduleKind::NearlyConstantMdp: {
            const double g = 1.0 - gamma;
            return td / (td + 1.0) * g * g * g / 16.0;
        }
        case ScheduleKind::NearlyConstantBandit:
            return td / (td + 1.0) / 5.0;
        case ScheduleKind::Constant:
            return 1.0 / smoothness;
        case ScheduleKind::ExponentialClipped: {
            const double g = 1.0 - gamma;
            return std::pow(growth_base, td) * g * g * g / 8.0;
        }
        case ScheduleKind::Normalized:
            // caller divides by the gradient norm
            return norm_const;
    }
    return 0.0;
}

double StepSchedule::max_growth_base(double gamma, double c_inf, int n_states,
                                     int n_actions) {
    const double g = 1.0 - gamma;
    return std::exp(1.0 / (8.0 * std::sqrt(static_cast<double>(n_actions)) * n_states) *
                    g / (4.0 * c_inf - g));
}

StepSchedule nearly_constant_mdp(double gamma) {
    StepSchedule s;
    s.kind = ScheduleKind::NearlyConstantMdp;
    s.gamma = gamma;
    const double g = 1.0 - gamma;
    s.smoothness = 8.0 / (g * g * g);
    return s;
}

StepSchedule nearly_constant_bandit() {
    StepSchedule s;
    s.kind = ScheduleKind::NearlyConstantBandit;
    s.smoothness = 5.0 / 2.0;
    return s;
}

StepSchedule constant_mdp(double gamma) {
    StepSchedule s;
    s.kind = ScheduleKind::Constant;
    s.gamma = gamma;
    const double g = 1.0 - gamma;
    s.smoothness = 8.0 / (g * g * g);
    return s;
}

StepSchedule constant_bandit() {
    StepSchedule s;
    s.kind = ScheduleKind::Constant;
    s.smoothness = 5.0 / 2.0;
    return s;
}

StepSchedule exponential_clipped(const Mdp& mdp, double c_inf, double beta) {
    StepSchedule s;
    s.kind = ScheduleKind::ExponentialClipped;
    s.gamma = mdp.gamma;
    s.c_inf = c_inf;
    const double g = 1.0 - mdp.gamma;
    s.smoothness = 8.0 / (g * g * g);
    const double beta_max = StepSchedule::max_growth_base(mdp.gamma, c_inf, mdp.n_states,
                                                          mdp.n_actions);
    if (beta <= 0.0) {
        s.growth_base = std::exp(0.9 * std::log(beta_max));
    } else {
        if (beta <= 1.0) {
            throw ValidationError("exponential_clipped: beta must exceed 1");
        }
        if (beta >= beta_max) {
            std::ostringstream os;
            os << "exponential_clipped: beta " << beta << " must lie below " << beta_max
               << " (admissible interval for c_inf " << c_inf << ")";
            throw ValidationError(os.str());
        }
        s.growth_base = beta;
    }
    s.clip_bound = 1.0 /
                       (4.0 * std::sqrt(static_cast<double>(mdp.n_actions)) * mdp.n_states) *
                       g / (4.0 * c_inf - g) +
                   2.0 * std::log(s.growth_base);
    return s;
}

StepSchedule normalized(const Mdp& mdp, double c_inf) {
    StepSchedule s;
    s.kind = ScheduleKind::Normalized;
    s.gamma = mdp.gamma;
    s.c_inf = c_inf;
    const double g = 1.0 - mdp.gamma;
    s.norm_const = g / (6.0 * g + 8.0 * (c_inf - g)) / std::sqrt(mdp.n_states);
    return s;
}

StepSchedule default_schedule(const Mdp& mdp) {
    return mdp.is_bandit() ? nearly_constant_bandit() : nearly_constant_mdp(mdp.gamma);
}

nlohmann::json schedule_to_json(const StepSchedule& s) {
    return nlohmann::json{{"kind", to_string(s.kind)},
                          {"gamma", s.gamma},
                          {"smoothness", s.smoothness},
                          {"growth_base", s.growth_base},
                          {"clip_bound", s.clip_bound},
                          {"c_inf", s.c_inf},
                          {"norm_const", s.norm_const}};
}

StepSchedule schedule_from_json(const nlohmann::json& j) {
    StepSchedule s;
    s.kind = schedule_kind_from_string(j.at("kind").get<std::string>());
    s.gamma = j.at("gamma").get<double>();
    s.smoothness = j.at("smoothness").get<double>();
    s.growth_base = j.at("growth_base").get<double>();
    s.clip_bound = j.at("clip_bound").get<double>();
    s.c_inf = j.at("c_inf").get<double>();
    s.norm_const = j.at("norm_const").get<double>();
    return s;
}

}  // namespace apglab
