#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apglab/presets.hpp"
#include "apglab/trace.hpp"

namespace apglab {

/// Runs `algorithm` on a preset and writes the trace CSV plus its JSON
/// sidecar to out_path. Returns the finished trace.
RunTrace run_experiment(const EnvPreset& preset, Algorithm algorithm,
                        const StepSchedule& schedule, const RunOptions& options,
                        const std::string& out_path);

/// One row of a comparison table.
struct CompareRow {
    std::string preset;
    std::string algorithm;
    long n_iters = 0;
    double final_gap = 0.0;
    double slope = 0.0;  // log-log slope over the last decade; NaN if unavailable
    long restarts = 0;
    long condition_onset = -1;  // first logged t where all four conditions hold
};

/// Runs every (preset, algorithm) pair. Parallelises across runs up to
/// max_threads (<= 0: hardware concurrency, capped by APG_LAB_THREADS).
std::vector<CompareRow> compare(const std::vector<std::string>& preset_names,
                                const std::vector<Algorithm>& algorithms, long n_iters,
                                int max_threads = 0);

std::string compare_table_text(const std::vector<CompareRow>& rows);
std::string compare_table_csv(const std::vector<CompareRow>& rows);
nlohmann::json compare_table_json(const std::vector<CompareRow>& rows);

/// Writes `content` to `path` via a temp file + rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace apglab
