#include "apglab/presets.hpp"

#include <array>
#include <sstream>

namespace apglab {

namespace {

// 5-state/5-action benchmark. The per-state tables give P(s'|s,a) with rows
// indexed by the destination s' and columns by the action a.
constexpr double kReward5x5[5][5] = {
    {1.0, 0.8, 0.6, 0.7, 0.4},
    {0.5, 0.3, 0.1, 1.0, 0.6},
    {0.6, 0.9, 0.8, 0.7, 1.0},
    {0.1, 0.2, 0.6, 0.7, 0.4},
    {0.8, 0.4, 0.6, 0.2, 0.9},
};

constexpr double kTransition5x5[5][5][5] = {
    // from s1: rows s'1..s'5, cols a1..a5
    {{0.1, 0.6, 0.5, 0.4, 0.2},
     {0.5, 0.1, 0.1, 0.3, 0.1},
     {0.1, 0.1, 0.1, 0.1, 0.1},
     {0.2, 0.1, 0.2, 0.1, 0.1},
     {0.1, 0.1, 0.1, 0.1, 0.5}},
    // from s2
    {{0.1, 0.4, 0.1, 0.4, 0.2},
     {0.5, 0.1, 0.4, 0.1, 0.2},
     {0.2, 0.2, 0.3, 0.1, 0.2},
     {0.1, 0.2, 0.1, 0.1, 0.2},
     {0.1, 0.1, 0.1, 0.3, 0.2}},
    // from s3
    {{0.6, 0.2, 0.3, 0.1, 0.2},
     {0.1, 0.4, 0.3, 0.4, 0.1},
     {0.1, 0.1, 0.2, 0.3, 0.1},
     {0.1, 0.2, 0.1, 0.1, 0.1},
     {0.1, 0.1, 0.1, 0.1, 0.5}},
    // from s4
    {{0.6, 0.1, 0.2, 0.4, 0.5},
     {0.1, 0.5, 0.1, 0.3, 0.1},
     {0.1, 0.1, 0.1, 0.1, 0.1},
     {0.1, 0.2, 0.1, 0.1, 0.2},
     {0.1, 0.1, 0.5, 0.1, 0.1}},
    // from s5
    {{0.2, 0.4, 0.4, 0.1, 0.2},
     {0.2, 0.1, 0.1, 0.4, 0.5},
     {0.2, 0.2, 0.1, 0.2, 0.1},
     {0.2, 0.2, 0.3, 0.1, 0.1},
     {0.2, 0.1, 0.1, 0.2, 0.1}},
};

constexpr double kHardTheta5x5[5][5] = {
    {1, 2, 3, 4, 5},
    {3, 4, 5, 1, 2},
    {5, 2, 3, 4, 1},
    {5, 4, 2, 1, 3},
    {2, 4, 3, 5, 1},
};

Mdp make_mdp5x5() {
    Mdp mdp;
    mdp.n_states = 5;
    mdp.n_actions = 5;
    mdp.gamma = 0.9;
    mdp.reward.resize(5, 5);
    for (int s = 0; s < 5; ++s) {
        for (int a = 0; a < 5; ++a) mdp.reward(s, a) = kReward5x5[s][a];
    }
    mdp.transition.assign(5, Eigen::MatrixXd(5, 5));
    for (int a = 0; a < 5; ++a) {
        for (int s = 0; s < 5; ++s) {
            for (int sp = 0; sp < 5; ++sp) {
                mdp.transition[a](s, sp) = kTransition5x5[s][sp][a];
            }
        }
    }
    mdp.rho.resize(5);
    mdp.rho << 0.3, 0.2, 0.1, 0.15, 0.25;
    // Fixed, well-spread surrogate distribution; keeps the clipped-step
    // growth-base interval usable and the sidecars bit-exact.
    mdp.mu.resize(5);
    mdp.mu << 0.18, 0.21, 0.21, 0.20, 0.20;
    mdp.validate();
    return mdp;
}

Mdp make_bandit(const std::vector<double>& rewards) {
    Mdp mdp;
    mdp.n_states = 1;
    mdp.n_actions = static_cast<int>(rewards.size());
    mdp.gamma = 0.0;
    mdp.reward.resize(1, mdp.n_actions);
    for (int a = 0; a < mdp.n_actions; ++a) mdp.reward(0, a) = rewards[a];
    mdp.transition.assign(mdp.n_actions, Eigen::MatrixXd::Ones(1, 1));
    mdp.rho = Eigen::VectorXd::Ones(1);
    mdp.mu = Eigen::VectorXd::Ones(1);
    mdp.validate();
    return mdp;
}

ParamMatrix row_theta(const std::vector<double>& vals) {
    ParamMatrix theta(1, static_cast<int>(vals.size()));
    for (std::size_t a = 0; a < vals.size(); ++a) theta(0, static_cast<int>(a)) = vals[a];
    return theta;
}

}  // namespace

const std::vector<std::string>& builtin_env_names() {
    static const std::vector<std::string> names = {
        "mdp5x5-uniform", "mdp5x5-hard",         "bandit3-uniform",
        "bandit3-hard",   "bandit3-nonmonotone", "bandit2",
    };
    return names;
}

EnvPreset builtin_env(const std::string& name) {
    EnvPreset preset;
    preset.name = name;
    if (name == "mdp5x5-uniform") {
        preset.mdp = make_mdp5x5();
        preset.init_theta = ParamMatrix::Zero(5, 5);
        preset.recommended_iters = 100000;
    } else if (name == "mdp5x5-hard") {
        preset.mdp = make_mdp5x5();
        preset.init_theta.resize(5, 5);
        for (int s = 0; s < 5; ++s) {
            for (int a = 0; a < 5; ++a) preset.init_theta(s, a) = kHardTheta5x5[s][a];
        }
        preset.recommended_iters = 100000;
    } else if (name == "bandit3-uniform") {
        preset.mdp = make_bandit({1.0, 0.99, 0.0});
        preset.init_theta = ParamMatrix::Zero(1, 3);
        preset.recommended_iters = 10000;
    } else if (name == "bandit3-hard") {
        preset.mdp = make_bandit({1.0, 0.99, 0.0});
        preset.init_theta = row_theta({1.0, 3.0, 5.0});
        preset.recommended_iters = 10000;
    } else if (name == "bandit3-nonmonotone") {
        preset.mdp = make_bandit({1.0, 0.8, 0.0});
        preset.init_theta = row_theta({0.0, 3.0, 10.0});
        preset.recommended_iters = 10000;
    } else if (name == "bandit2") {
        preset.mdp = make_bandit({1.0, 0.0});
        preset.init_theta = ParamMatrix::Zero(1, 2);
        preset.recommended_iters = 10000;
    } else {
        std::ostringstream os;
        os << "unknown preset: " << name << " (valid:";
        for (const auto& n : builtin_env_names()) os << ' ' << n;
        os << ')';
        throw ValidationError(os.str());
    }
    return preset;
}

Mdp random_mdp(std::uint64_t seed, int n_states, int n_actions, double gamma) {
    if (n_states < 1) throw ValidationError("random_mdp: n_states must be >= 1");
    if (n_actions < 2) throw ValidationError("random_mdp: n_actions must be >= 2");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ValidationError("random_mdp: bad gamma");

    Rng rng(seed);
    Mdp mdp;
    mdp.n_states = n_states;
    mdp.n_actions = n_actions;
    mdp.gamma = gamma;
    mdp.transition.assign(n_actions, Eigen::MatrixXd(n_states, n_states));
    for (int a = 0; a < n_actions; ++a) {
        for (int s = 0; s < n_states; ++s) {
            mdp.transition[a].row(s) = rng.dirichlet(n_states).transpose();
        }
    }
    mdp.reward.resize(n_states, n_actions);
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) mdp.reward(s, a) = rng.uniform();
    }
    mdp.rho = Eigen::VectorXd::Constant(n_states, 1.0 / n_states);
    mdp.mu = rng.dirichlet(n_states);
    mdp.validate();
    return mdp;
}

}  // namespace apglab
