#include "apglab/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "apglab/diagnostics.hpp"

namespace apglab {

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

RunTrace run_experiment(const EnvPreset& preset, Algorithm algorithm,
                        const StepSchedule& schedule, const RunOptions& options,
                        const std::string& out_path) {
    RunTrace trace = run(algorithm, preset.mdp, preset.init_theta, schedule, options);
    trace.config["preset"] = preset.name;
    trace.write_files(out_path);
    return trace;
}

namespace {

int thread_budget(int max_threads) {
    int budget = max_threads > 0 ? max_threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("APG_LAB_THREADS")) {
        const int parsed = std::atoi(cap);
        if (parsed > 0) budget = std::min(budget, parsed);
    }
    return std::max(budget, 1);
}

CompareRow run_one(const std::string& preset_name, Algorithm algorithm, long n_iters) {
    const EnvPreset preset = builtin_env(preset_name);
    RunOptions options;
    options.n_iters = n_iters;
    const StepSchedule schedule = default_schedule(preset.mdp);
    const RunTrace trace = run(algorithm, preset.mdp, preset.init_theta, schedule, options);

    CompareRow row;
    row.preset = preset_name;
    row.algorithm = to_string(algorithm);
    row.n_iters = n_iters;
    row.final_gap = trace.records.back().gap_rho;
    row.restarts = 0;
    row.condition_onset = -1;
    for (const auto& r : trace.records) {
        row.restarts += r.restart_active;
        if (row.condition_onset < 0 && r.cond_i && r.cond_ii && r.cond_iii && r.cond_iv) {
            row.condition_onset = r.t;
        }
    }
    const long t_end = trace.records.back().t;
    try {
        row.slope = loglog_slope(trace, t_end / 10, t_end);
    } catch (const std::exception&) {
        row.slope = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

}  // namespace

std::vector<CompareRow> compare(const std::vector<std::string>& preset_names,
                                const std::vector<Algorithm>& algorithms, long n_iters,
                                int max_threads) {
    struct Job {
        std::string preset;
        Algorithm algorithm;
    };
    std::vector<Job> jobs;
    for (const auto& p : preset_names) {
        for (Algorithm a : algorithms) jobs.push_back({p, a});
    }

    std::vector<CompareRow> rows(jobs.size());
    std::vector<std::string> errors;
    std::mutex error_mutex;
    std::atomic<std::size_t> next{0};

    const int n_threads = std::min<int>(thread_budget(max_threads),
                                        static_cast<int>(jobs.size()));
    std::vector<std::thread> workers;
    for (int w = 0; w < n_threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
                try {
                    rows[i] = run_one(jobs[i].preset, jobs[i].algorithm, n_iters);
                } catch (const std::exception& e) {
                    std::scoped_lock lock(error_mutex);
                    errors.push_back(jobs[i].preset + "/" + to_string(jobs[i].algorithm) +
                                     ": " + e.what());
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (!errors.empty()) throw NumericError("compare: " + errors.front());
    return rows;
}

std::string compare_table_text(const std::vector<CompareRow>& rows) {
    std::ostringstream os;
    os << std::left << std::setw(22) << "preset" << std::setw(10) << "algo" << std::right
       << std::setw(10) << "iters" << std::setw(14) << "final_gap" << std::setw(9)
       << "slope" << std::setw(10) << "restarts" << std::setw(12) << "cond_onset" << '\n';
    for (const auto& r : rows) {
        os << std::left << std::setw(22) << r.preset << std::setw(10) << r.algorithm
           << std::right << std::setw(10) << r.n_iters << std::setw(14)
           << std::setprecision(4) << std::scientific << r.final_gap << std::defaultfloat
           << std::setw(9) << std::setprecision(3) << r.slope << std::setw(10) << r.restarts
           << std::setw(12) << r.condition_onset << '\n';
    }
    return os.str();
}

std::string compare_table_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream os;
    os << "preset,algorithm,n_iters,final_gap,slope,restarts,condition_onset\n";
    os << std::setprecision(17);
    for (const auto& r : rows) {
        os << r.preset << ',' << r.algorithm << ',' << r.n_iters << ',' << r.final_gap
           << ',' << r.slope << ',' << r.restarts << ',' << r.condition_onset << '\n';
    }
    return os.str();
}

nlohmann::json compare_table_json(const std::vector<CompareRow>& rows) {
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"preset", r.preset},
                       {"algorithm", r.algorithm},
                       {"n_iters", r.n_iters},
                       {"final_gap", r.final_gap},
                       {"slope", r.slope},
                       {"restarts", r.restarts},
                       {"condition_onset", r.condition_onset}});
    }
    return arr;
}

}  // namespace apglab
