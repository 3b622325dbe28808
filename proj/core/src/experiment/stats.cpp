#include "ddmpc/experiment/stats.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ddmpc/io/format.hpp"
#include "ddmpc/sim/pendulum.hpp"

namespace ddmpc::experiment {

MeanStderr success_rate(const std::vector<LearningCurve>& curves, int trial_index) {
  if (curves.empty()) throw std::invalid_argument("success_rate: no curves");
  int n = 0;
  int successes = 0;
  for (const auto& c : curves) {
    if (trial_index < 0 || trial_index >= static_cast<int>(c.records.size())) {
      throw std::invalid_argument("success_rate: trial index out of range");
    }
    ++n;
    successes += c.records[static_cast<std::size_t>(trial_index)].success ? 1 : 0;
  }
  MeanStderr out;
  out.mean = static_cast<double>(successes) / n;
  out.se = n > 1 ? std::sqrt(out.mean * (1.0 - out.mean) / (n - 1)) : 0.0;
  return out;
}

void write_curves_csv(const std::filesystem::path& path,
                      const std::vector<LearningCurve>& curves) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curves_csv: cannot open " + path.string());
  out << "seed,trial,frames_seen,success,final_angle_rad,mean_tail_error_rad,V_R,V_P,"
         "train_seconds\n";
  for (const auto& c : curves) {
    for (const auto& r : c.records) {
      out << c.seed << "," << r.trial << "," << r.frames_seen << "," << (r.success ? 1 : 0)
          << "," << io::format_g17(r.final_angle) << "," << io::format_g17(r.mean_tail_error)
          << "," << io::format_g17(r.v_r) << "," << io::format_g17(r.v_p) << ","
          << io::format_g17(r.train_seconds) << "\n";
    }
  }
}

void write_aggregate_csv(const std::filesystem::path& path,
                         const std::vector<LearningCurve>& curves) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_aggregate_csv: cannot open " + path.string());
  out << "trial,frames_seen,success_mean,success_stderr\n";
  if (curves.empty()) return;
  const std::size_t trials = curves.front().records.size();
  for (const auto& c : curves) {
    if (c.records.size() != trials) {
      throw std::invalid_argument("write_aggregate_csv: curves of unequal length");
    }
  }
  for (std::size_t t = 0; t < trials; ++t) {
    const MeanStderr s = success_rate(curves, static_cast<int>(t));
    out << curves.front().records[t].trial << "," << curves.front().records[t].frames_seen
        << "," << io::format_g17(s.mean) << "," << io::format_g17(s.se) << "\n";
  }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& angles) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path.string());
  out << "step,angle_rad,upright_error_rad\n";
  for (std::size_t i = 0; i < angles.size(); ++i) {
    out << i << "," << io::format_g17(angles[i]) << ","
        << io::format_g17(sim::upright_error(angles[i])) << "\n";
  }
}

}  // namespace ddmpc::experiment
