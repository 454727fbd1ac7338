#pragma once

#include <string>
#include <vector>

#include "apglab/mdp.hpp"

namespace apglab {

/// A named environment plus its initial parameters.
struct EnvPreset {
    std::string name;
    Mdp mdp;
    ParamMatrix init_theta;
    long recommended_iters = 10000;
};

/// Built-in environments:
///   mdp5x5-uniform, mdp5x5-hard  : the 5-state/5-action benchmark MDP
///   bandit3-uniform, bandit3-hard: r = [1, 0.99, 0]
///   bandit3-nonmonotone          : r = [1, 0.8, 0], theta0 = [0, 3, 10]
///   bandit2                      : r = [1, 0]
/// Throws ValidationError listing the valid names otherwise.
EnvPreset builtin_env(const std::string& name);

const std::vector<std::string>& builtin_env_names();

/// Random MDP with Dirichlet(1) transition rows, uniform [0,1] rewards,
/// uniform rho and a Dirichlet(1) mu; deterministic per seed.
Mdp random_mdp(std::uint64_t seed, int n_states, int n_actions, double gamma);

}  // namespace apglab
