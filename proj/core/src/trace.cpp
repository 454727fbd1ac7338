#include "apglab/trace.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "apglab/diagnostics.hpp"

namespace apglab {

bool LogSpacing::should_log(long t) const {
    if (t <= dense_until) return true;
    if (points_per_decade <= 0) return true;
    const double k = std::round(points_per_decade * std::log10(static_cast<double>(t)));
    const double back = std::pow(10.0, k / points_per_decade);
    return static_cast<long>(std::llround(back)) == t;
}

const std::array<const char*, 17>& RunTrace::column_names() {
    static const std::array<const char*, 17> names = {
        "t",           "eta",          "v_mu",          "v_mu_omega",     "v_rho",
        "gap_rho",     "gap_mu",       "restart_active", "grad_norm",     "mom_improve",
        "grad_improve", "min_theta_gap", "feasible_domain", "cond_i",      "cond_ii",
        "cond_iii",    "cond_iv"};
    return names;
}

void RunTrace::to_csv(std::ostream& out) const {
    const auto& names = column_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << names[i] << (i + 1 < names.size() ? ',' : '\n');
    }
    out << std::setprecision(17);
    for (const auto& r : records) {
        out << r.t << ',' << r.eta << ',' << r.v_mu << ',' << r.v_mu_omega << ','
            << r.v_rho << ',' << r.gap_rho << ',' << r.gap_mu << ',' << r.restart_active
            << ',' << r.grad_norm << ',' << r.mom_improve << ',' << r.grad_improve << ','
            << r.min_theta_gap << ',' << r.feasible_domain << ',' << r.cond_i << ','
            << r.cond_ii << ',' << r.cond_iii << ',' << r.cond_iv << '\n';
    }
}

std::string RunTrace::to_csv_string() const {
    std::ostringstream os;
    to_csv(os);
    return os.str();
}

RunTrace RunTrace::from_csv(std::istream& in) {
    RunTrace trace;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("trace CSV: missing header");
    {
        std::ostringstream expect;
        const auto& names = column_names();
        for (std::size_t i = 0; i < names.size(); ++i) {
            expect << names[i] << (i + 1 < names.size() ? "," : "");
        }
        if (line != expect.str()) {
            throw ValidationError("trace CSV: unexpected header: " + line);
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != column_names().size()) {
            throw ValidationError("trace CSV: malformed row: " + line);
        }
        TraceRecord r;
        int i = 0;
        r.t = static_cast<long>(vals[i++]);
        r.eta = vals[i++];
        r.v_mu = vals[i++];
        r.v_mu_omega = vals[i++];
        r.v_rho = vals[i++];
        r.gap_rho = vals[i++];
        r.gap_mu = vals[i++];
        r.restart_active = static_cast<int>(vals[i++]);
        r.grad_norm = vals[i++];
        r.mom_improve = vals[i++];
        r.grad_improve = vals[i++];
        r.min_theta_gap = vals[i++];
        r.feasible_domain = static_cast<int>(vals[i++]);
        r.cond_i = static_cast<int>(vals[i++]);
        r.cond_ii = static_cast<int>(vals[i++]);
        r.cond_iii = static_cast<int>(vals[i++]);
        r.cond_iv = static_cast<int>(vals[i++]);
        trace.records.push_back(r);
    }
    return trace;
}

namespace {

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string sidecar_path(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".json");
    return p.string();
}

double min_gap_to_best(const ParamMatrix& theta, const std::vector<int>& a_star) {
    double worst = std::numeric_limits<double>::infinity();
    for (Eigen::Index s = 0; s < theta.rows(); ++s) {
        double other = -std::numeric_limits<double>::infinity();
        for (Eigen::Index a = 0; a < theta.cols(); ++a) {
            if (a != a_star[s]) other = std::max(other, theta(s, a));
        }
        worst = std::min(worst, theta(s, a_star[s]) - other);
    }
    return worst;
}

}  // namespace

std::string RunTrace::write_files(const std::string& csv_path) const {
    write_atomic(csv_path, to_csv_string());
    const std::string side = sidecar_path(csv_path);
    write_atomic(side, config.dump(2) + "\n");
    return side;
}

RunTrace run(Algorithm algorithm, const Mdp& mdp, const ParamMatrix& init_theta,
             const StepSchedule& schedule, const RunOptions& options) {
    mdp.validate();
    if (init_theta.rows() != mdp.n_states || init_theta.cols() != mdp.n_actions) {
        throw ValidationError("run: init_theta shape does not match the MDP");
    }
    if (!init_theta.allFinite()) throw ValidationError("run: init_theta must be finite");
    if (options.n_iters < 1) throw ValidationError("run: n_iters must be >= 1");

    const OptimalSolution opt = optimal_solution(mdp);
    const double v_star_rho = opt.v_star.dot(mdp.rho);
    const double v_star_mu = opt.v_star.dot(mdp.mu);
    const double margin =
        options.condition_margin < 0.0 ? m_c_threshold(1.5, mdp) : options.condition_margin;

    OptimizerState state = OptimizerState::init(init_theta);
    Rng rng(options.seed);

    RunTrace trace;
    trace.config = nlohmann::json{
        {"algorithm", to_string(algorithm)},
        {"schedule", schedule_to_json(schedule)},
        {"n_iters", options.n_iters},
        {"seed", options.seed},
        {"batch_size", options.batch_size},
        {"hb_beta", options.hb_beta},
        {"t_shift", options.t_shift},
        {"gap_stop", options.gap_stop},
        {"condition_margin", options.condition_margin},
        {"log",
         {{"dense_until", options.log.dense_until},
          {"points_per_decade", options.log.points_per_decade}}},
        {"env", mdp_to_json(mdp)},
        {"env_hash", mdp_hash(mdp)},
        {"init_theta", [&] {
             auto rows = nlohmann::json::array();
             for (int s = 0; s < mdp.n_states; ++s) {
                 auto row = nlohmann::json::array();
                 for (int a = 0; a < mdp.n_actions; ++a) row.push_back(init_theta(s, a));
                 rows.push_back(std::move(row));
             }
             return rows;
         }()}};

    const auto record_at = [&](long t, const StepInfo& info,
                               double v_rho_omega_prev) -> TraceRecord {
        TraceRecord r;
        r.t = t;
        r.eta = info.eta;
        const Eigen::VectorXd v_theta = state_values(mdp, softmax_policy(state.theta));
        const Eigen::VectorXd v_omega = state_values(mdp, softmax_policy(state.omega));
        r.v_mu = v_theta.dot(mdp.mu);
        r.v_mu_omega = v_omega.dot(mdp.mu);
        r.v_rho = v_theta.dot(mdp.rho);
        r.gap_rho = v_star_rho - r.v_rho;
        r.gap_mu = v_star_mu - r.v_mu;
        r.restart_active = info.restarted ? 1 : 0;
        r.grad_norm = info.grad_norm;
        const double v_rho_omega = v_omega.dot(mdp.rho);
        r.mom_improve = v_rho_omega - r.v_rho;
        r.grad_improve = t == 0 ? 0.0 : r.v_rho - v_rho_omega_prev;
        r.min_theta_gap = min_gap_to_best(state.theta, opt.a_star);
        if (t == 0) {
            r.feasible_domain = 0;
        } else {
            const ParamMatrix direction = state.theta - state.theta_prev;
            r.feasible_domain = in_feasible_domain(direction, opt.a_star) ? 1 : 0;
        }
        const ConditionFlags flags = concavity_conditions(state, mdp, opt, margin);
        r.cond_i = flags.cond_i ? 1 : 0;
        r.cond_ii = flags.cond_ii ? 1 : 0;
        r.cond_iii = flags.cond_iii ? 1 : 0;
        r.cond_iv = flags.cond_iv ? 1 : 0;
        return r;
    };

    {
        StepInfo initial;
        initial.grad_norm = policy_gradient(mdp, init_theta, mdp.mu).norm();
        trace.records.push_back(record_at(0, initial, 0.0));
    }

    for (long t = 1; t <= options.n_iters; ++t) {
        const bool log_now = options.log.should_log(t) || t == options.n_iters;
        double v_rho_omega_prev = 0.0;
        if (log_now) {
            v_rho_omega_prev =
                state_values(mdp, softmax_policy(state.omega)).dot(mdp.rho);
        }

        StepInfo info;
        switch (algorithm) {
            case Algorithm::Pg: info = pg_step(state, mdp, schedule); break;
            case Algorithm::Apg: info = apg_step(state, mdp, schedule); break;
            case Algorithm::Napg: info = napg_step(state, mdp, schedule); break;
            case Algorithm::Hbpg:
                info = hbpg_step(state, mdp, schedule.eta(t), options.hb_beta);
                break;
            case Algorithm::ApgClipped: info = apg_clipped_step(state, mdp, schedule); break;
            case Algorithm::ApgNormalized:
                info = apg_normalized_step(state, mdp, schedule);
                break;
            case Algorithm::Sapg:
                info = sapg_step(state, mdp, schedule, rng, options.batch_size);
                break;
            case Algorithm::GhadimiAg:
                info = ghadimi_ag_step(state, mdp, options.t_shift, schedule.smoothness);
                break;
        }
        if (!state.theta.allFinite()) {
            throw NumericError("run: non-finite parameters at iteration " +
                               std::to_string(t));
        }
        if (log_now) {
            trace.records.push_back(record_at(t, info, v_rho_omega_prev));
            if (trace.records.back().gap_rho < options.gap_stop) break;
        }
    }
    return trace;
}

RunTrace rerun_from_config(const nlohmann::json& sidecar) {
    const Mdp mdp = mdp_from_json(sidecar.at("env"));
    const StepSchedule schedule = schedule_from_json(sidecar.at("schedule"));
    RunOptions options;
    options.n_iters = sidecar.at("n_iters").get<long>();
    options.seed = sidecar.at("seed").get<std::uint64_t>();
    options.batch_size = sidecar.at("batch_size").get<int>();
    options.hb_beta = sidecar.at("hb_beta").get<double>();
    options.t_shift = sidecar.at("t_shift").get<long>();
    options.gap_stop = sidecar.at("gap_stop").get<double>();
    options.condition_margin = sidecar.at("condition_margin").get<double>();
    options.log.dense_until = sidecar.at("log").at("dense_until").get<long>();
    options.log.points_per_decade = sidecar.at("log").at("points_per_decade").get<int>();

    const auto& th = sidecar.at("init_theta");
    ParamMatrix init_theta(mdp.n_states, mdp.n_actions);
    for (int s = 0; s < mdp.n_states; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            init_theta(s, a) = th.at(s).at(a).get<double>();
        }
    }
    return run(algorithm_from_string(sidecar.at("algorithm").get<std::string>()), mdp,
               init_theta, schedule, options);
}

}  // namespace apglab
