#include "apglab/mdp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace apglab {

namespace {

constexpr double kProbTol = 1e-12;

void check_prob_vector(const Eigen::VectorXd& p, const std::string& name) {
    if (p.minCoeff() < 0.0) {
        throw ValidationError(name + " has a negative entry");
    }
    if (std::abs(p.sum() - 1.0) > kProbTol) {
        std::ostringstream os;
        os << name << " sums to " << p.sum() << ", expected 1 within " << kProbTol;
        throw ValidationError(os.str());
    }
}

}  // namespace

void Mdp::validate() const {
    if (n_states < 1) throw ValidationError("n_states must be >= 1");
    if (n_actions < 2) throw ValidationError("n_actions must be >= 2");
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw ValidationError("gamma must lie in [0, 1)");
    }
    if (static_cast<int>(transition.size()) != n_actions) {
        throw ValidationError("transition must have one matrix per action");
    }
    for (int a = 0; a < n_actions; ++a) {
        const auto& pa = transition[a];
        if (pa.rows() != n_states || pa.cols() != n_states) {
            throw ValidationError("transition matrix for action " + std::to_string(a) +
                                  " has wrong shape");
        }
        for (int s = 0; s < n_states; ++s) {
            if (pa.row(s).minCoeff() < 0.0) {
                throw ValidationError("P(.|s=" + std::to_string(s) +
                                      ",a=" + std::to_string(a) + ") has a negative entry");
            }
            const double sum = pa.row(s).sum();
            if (std::abs(sum - 1.0) > kProbTol) {
                std::ostringstream os;
                os << "P(.|s=" << s << ",a=" << a << ") sums to " << sum
                   << ", expected 1 within " << kProbTol;
                throw ValidationError(os.str());
            }
        }
    }
    if (reward.rows() != n_states || reward.cols() != n_actions) {
        throw ValidationError("reward table has wrong shape");
    }
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            const double r = reward(s, a);
            if (!(r >= 0.0 && r <= 1.0)) {
                throw ValidationError("reward(s=" + std::to_string(s) +
                                      ",a=" + std::to_string(a) + ") outside [0, 1]");
            }
        }
    }
    if (rho.size() != n_states) throw ValidationError("rho has wrong length");
    if (mu.size() != n_states) throw ValidationError("mu has wrong length");
    check_prob_vector(rho, "rho");
    check_prob_vector(mu, "mu");
}

double Rng::uniform() {
    // 53 bits of the raw stream; identical across standard libraries.
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

int Rng::categorical(const Eigen::VectorXd& weights) {
    const double total = weights.sum();
    double u = uniform() * total;
    for (int i = 0; i + 1 < weights.size(); ++i) {
        u -= weights[i];
        if (u < 0.0) return i;
    }
    return static_cast<int>(weights.size()) - 1;
}

Eigen::VectorXd Rng::dirichlet(int n) {
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        // -ln(U) is Exp(1); normalized exponentials are Dirichlet(1,...,1).
        double u = uniform();
        while (u <= 0.0) u = uniform();
        out[i] = -std::log(u);
    }
    return out / out.sum();
}

Mdp mdp_from_json(const nlohmann::json& doc, std::uint64_t mu_seed) {
    Mdp mdp;
    try {
        mdp.n_states = doc.at("n_states").get<int>();
        mdp.n_actions = doc.at("n_actions").get<int>();
        mdp.gamma = doc.at("gamma").get<double>();

        const auto& rho = doc.at("rho");
        if (static_cast<int>(rho.size()) != mdp.n_states) {
            throw ValidationError("rho length does not match n_states");
        }
        mdp.rho.resize(mdp.n_states);
        for (int s = 0; s < mdp.n_states; ++s) mdp.rho[s] = rho.at(s).get<double>();

        const auto& reward = doc.at("reward");
        if (static_cast<int>(reward.size()) != mdp.n_states) {
            throw ValidationError("reward must have one row per state");
        }
        mdp.reward.resize(mdp.n_states, mdp.n_actions);
        for (int s = 0; s < mdp.n_states; ++s) {
            if (static_cast<int>(reward.at(s).size()) != mdp.n_actions) {
                throw ValidationError("reward row " + std::to_string(s) + " has wrong length");
            }
            for (int a = 0; a < mdp.n_actions; ++a) {
                mdp.reward(s, a) = reward.at(s).at(a).get<double>();
            }
        }

        const auto& tr = doc.at("transition");
        if (static_cast<int>(tr.size()) != mdp.n_actions) {
            throw ValidationError("transition must have one [s][s'] table per action");
        }
        mdp.transition.resize(mdp.n_actions);
        for (int a = 0; a < mdp.n_actions; ++a) {
            mdp.transition[a].resize(mdp.n_states, mdp.n_states);
            const auto& ta = tr.at(a);
            if (static_cast<int>(ta.size()) != mdp.n_states) {
                throw ValidationError("transition[" + std::to_string(a) +
                                      "] must have one row per state");
            }
            for (int s = 0; s < mdp.n_states; ++s) {
                const auto& row = ta.at(s);
                if (static_cast<int>(row.size()) != mdp.n_states) {
                    throw ValidationError("transition[" + std::to_string(a) + "][" +
                                          std::to_string(s) + "] has wrong length");
                }
                for (int sp = 0; sp < mdp.n_states; ++sp) {
                    mdp.transition[a](s, sp) = row.at(sp).get<double>();
                }
            }
        }

        if (doc.contains("mu")) {
            const auto& mu = doc.at("mu");
            if (static_cast<int>(mu.size()) != mdp.n_states) {
                throw ValidationError("mu length does not match n_states");
            }
            mdp.mu.resize(mdp.n_states);
            for (int s = 0; s < mdp.n_states; ++s) mdp.mu[s] = mu.at(s).get<double>();
        } else {
            Rng rng(mu_seed);
            mdp.mu = rng.dirichlet(mdp.n_states);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed MDP document: ") + e.what());
    }
    mdp.validate();
    return mdp;
}

Mdp load_mdp(const std::string& path, std::uint64_t mu_seed) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open MDP file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return mdp_from_json(doc, mu_seed);
}

nlohmann::json mdp_to_json(const Mdp& mdp) {
    nlohmann::json doc;
    doc["n_states"] = mdp.n_states;
    doc["n_actions"] = mdp.n_actions;
    doc["gamma"] = mdp.gamma;
    doc["rho"] = std::vector<double>(mdp.rho.begin(), mdp.rho.end());
    doc["mu"] = std::vector<double>(mdp.mu.begin(), mdp.mu.end());
    auto reward = nlohmann::json::array();
    for (int s = 0; s < mdp.n_states; ++s) {
        auto row = nlohmann::json::array();
        for (int a = 0; a < mdp.n_actions; ++a) row.push_back(mdp.reward(s, a));
        reward.push_back(std::move(row));
    }
    doc["reward"] = std::move(reward);
    auto tr = nlohmann::json::array();
    for (int a = 0; a < mdp.n_actions; ++a) {
        auto ta = nlohmann::json::array();
        for (int s = 0; s < mdp.n_states; ++s) {
            auto row = nlohmann::json::array();
            for (int sp = 0; sp < mdp.n_states; ++sp) row.push_back(mdp.transition[a](s, sp));
            ta.push_back(std::move(row));
        }
        tr.push_back(std::move(ta));
    }
    doc["transition"] = std::move(tr);
    return doc;
}

std::uint64_t mdp_hash(const Mdp& mdp) {
    const std::string bytes = mdp_to_json(mdp).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace apglab
