#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace apglab {

/// Raised when an input (file, flag, matrix shape, probability table)
/// violates a documented precondition.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a computation produces non-finite values or a solver fails.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ParamMatrix = Eigen::MatrixXd;   // (state, action) table of logits or updates
using PolicyMatrix = Eigen::MatrixXd;  // row-stochastic (state, action) table

/// A finite discounted MDP with an evaluation distribution `rho` and a
/// surrogate optimization distribution `mu`.
///
/// `transition[a]` is an n_states x n_states matrix with
/// transition[a](s, s') = P(s' | s, a); every row is a distribution.
struct Mdp {
    int n_states = 0;
    int n_actions = 0;
    std::vector<Eigen::MatrixXd> transition;  // one row-stochastic matrix per action
    Eigen::MatrixXd reward;                   // (state, action), entries in [0, 1]
    double gamma = 0.0;
    Eigen::VectorXd rho;
    Eigen::VectorXd mu;

    bool is_bandit() const { return n_states == 1 && gamma == 0.0; }

    /// Checks every structural invariant; throws ValidationError naming the
    /// offending entry otherwise.
    void validate() const;
};

/// Parses and validates an MDP from its JSON document form.
///
/// Expected keys: n_states, n_actions, gamma, rho, reward (row-major [s][a])
/// and transition ([a][s][s'] with transition[a][s][s'] = P(s'|s,a)).
/// `mu` is optional; when absent it is drawn from a symmetric Dirichlet(1)
/// using `mu_seed` (default 0).
Mdp mdp_from_json(const nlohmann::json& doc, std::uint64_t mu_seed = 0);

/// Reads `path` and forwards to mdp_from_json.
Mdp load_mdp(const std::string& path, std::uint64_t mu_seed = 0);

/// Serializes the MDP (including mu) back to the document form accepted by
/// mdp_from_json. Round-trips bit-exactly.
nlohmann::json mdp_to_json(const Mdp& mdp);

/// FNV-1a over the serialized document; used to stamp trace sidecars.
std::uint64_t mdp_hash(const Mdp& mdp);

/// Deterministic RNG used everywhere randomness is needed.
///
/// Wraps std::mt19937_64 but derives uniform doubles from raw bits so that
/// streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Index drawn from an (unnormalized, nonnegative) weight vector.
    int categorical(const Eigen::VectorXd& weights);

    /// Symmetric Dirichlet(1): normalized standard exponentials.
    Eigen::VectorXd dirichlet(int n);

private:
    std::mt19937_64 gen_;
};

}  // namespace apglab
