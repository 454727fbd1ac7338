#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "apglab/mdp.hpp"
#include "apglab/optimizer.hpp"
#include "apglab/schedule.hpp"

namespace apglab {

/// One logged iteration. Improvement columns follow the paper's
/// decomposition: grad_improve is the value gained by the gradient step that
/// produced theta^(t), mom_improve the value gained (or lost) by moving from
/// theta^(t) to omega^(t). Both are measured under rho.
struct TraceRecord {
    long t = 0;
    double eta = 0.0;
    double v_mu = 0.0;
    double v_mu_omega = 0.0;
    double v_rho = 0.0;
    double gap_rho = 0.0;
    double gap_mu = 0.0;
    int restart_active = 0;
    double grad_norm = 0.0;
    double mom_improve = 0.0;
    double grad_improve = 0.0;
    double min_theta_gap = 0.0;
    int feasible_domain = 0;
    int cond_i = 0;
    int cond_ii = 0;
    int cond_iii = 0;
    int cond_iv = 0;
};

/// Iterations to log: every iteration up to dense_until, then multiplicative
/// spacing with points_per_decade, always including the final iteration.
/// points_per_decade <= 0 logs every iteration.
struct LogSpacing {
    long dense_until = 100;
    int points_per_decade = 60;

    bool should_log(long t) const;
};

struct RunOptions {
    long n_iters = 1000;
    LogSpacing log;
    std::uint64_t seed = 0;          // sapg sampling
    int batch_size = 1;              // sapg
    double hb_beta = 0.9;            // hbpg momentum factor
    long t_shift = 0;                // three-sequence AG
    double gap_stop = 1e-14;         // stop once gap_rho falls below this
    double condition_margin = -1.0;  // M for cond_i; < 0 means m_c_threshold(3/2)
};

struct RunTrace {
    std::vector<TraceRecord> records;
    nlohmann::json config;  // full reproduction record (algorithm, schedule, env, seed)

    static const std::array<const char*, 17>& column_names();

    void to_csv(std::ostream& out) const;
    std::string to_csv_string() const;
    static RunTrace from_csv(std::istream& in);

    /// Writes `<path>` (CSV) and `<path stem>.json` (config sidecar)
    /// atomically (temp file + rename). Returns the sidecar path.
    std::string write_files(const std::string& csv_path) const;
};

/// Deterministic run loop shared by all algorithms. Computes the optimal
/// solution once for gap columns, logs per LogSpacing and stops early only
/// on non-finite parameters (NumericError) or gap_rho < gap_stop.
RunTrace run(Algorithm algorithm, const Mdp& mdp, const ParamMatrix& init_theta,
             const StepSchedule& schedule, const RunOptions& options);

/// Rebuilds the Mdp + options of a sidecar document and re-runs it.
RunTrace rerun_from_config(const nlohmann::json& sidecar);

}  // namespace apglab
