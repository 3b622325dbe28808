#pragma once

#include <filesystem>

#include "ddmpc/experiment/experiment.hpp"

namespace ddmpc::experiment {

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;
};

/// Success statistics at one trial index across seeds. The standard error is
/// the binomial sqrt(p(1-p)/(N-1)) (0 for a single curve), which reproduces
/// published success-rate error bars exactly.
MeanStderr success_rate(const std::vector<LearningCurve>& curves, int trial_index);

/// Per-seed records: seed, trial, frames_seen, success, final_angle_rad,
/// mean_tail_error_rad, V_R, V_P, train_seconds.
void write_curves_csv(const std::filesystem::path& path,
                      const std::vector<LearningCurve>& curves);

/// Aggregate: trial, frames_seen, success_mean, success_stderr.
void write_aggregate_csv(const std::filesystem::path& path,
                         const std::vector<LearningCurve>& curves);

/// Greedy-eval trace: step, angle_rad, upright_error_rad.
void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& angles);

}  // namespace ddmpc::experiment
