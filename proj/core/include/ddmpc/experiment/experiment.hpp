#pragma once

#include <limits>

#include "ddmpc/experiment/config.hpp"
#include "ddmpc/train/dataset.hpp"
#include "ddmpc/train/pca.hpp"

namespace ddmpc::experiment {

struct TrialRecord {
  int trial = 0;
  long frames_seen = 0;  // frames the evaluated model was trained on
  bool success = false;
  double final_angle = 0.0;
  double mean_tail_error = 0.0;
  double v_r = std::numeric_limits<double>::quiet_NaN();
  double v_p = std::numeric_limits<double>::quiet_NaN();
  double train_seconds = 0.0;
  std::vector<double> angles;  // greedy-eval trace (random-trial trace at index 0)
};

struct LearningCurve {
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;  // one per trial, index 0 = random trial
};

struct EvalOutcome {
  bool success = false;
  double final_angle = 0.0;
  double mean_tail_error = 0.0;
  std::vector<double> angles;
};

struct ExperimentResult {
  LearningCurve curve;
  model::DdmParams model;  // final trained model (valid when trained)
  train::PcaProjection pca;
  train::Dataset data;  // raw pixel trajectories collected across all trials
  bool trained = false;
};

/// Success: wrapped distance to upright <= tol for all of the trailing
/// `tail` entries of the angle trace.
bool stabilized_at_upright(const std::vector<double>& angles, int tail = 10,
                           double tol_rad = 10.0 * std::numbers::pi / 180.0);

/// 100-frame trial under uniform random torques from rest; raw pixel frames.
train::Trajectory run_random_trial(const ExperimentConfig& cfg, num::Rng& rng,
                                   std::vector<double>* angles_out = nullptr);

/// One closed-loop trial from rest under the epsilon-greedy MPC policy.
/// `epsilon` overrides cfg.mpc.epsilon (pass 0 for greedy evaluation).
train::Trajectory run_mpc_trial(const model::DdmParams& params,
                                const train::PcaProjection& pca, const num::Vec& z_ref,
                                const ExperimentConfig& cfg, double epsilon, num::Rng& rng,
                                std::vector<double>* angles_out = nullptr);

/// Greedy rollout (epsilon = 0) with the stabilization success criterion;
/// never touches training data.
EvalOutcome evaluate_greedy(const model::DdmParams& params, const train::PcaProjection& pca,
                            const ExperimentConfig& cfg, num::Rng rng);

/// The full adaptive loop: random trial, then per trial {refit projection,
/// retrain on everything collected plus the reference frame, run one
/// epsilon-greedy trial, greedy-evaluate}. Deterministic per seed.
ExperimentResult run_learning_experiment(const ExperimentConfig& cfg);

/// Exact warm-start transport of a trained model across a projection refit:
/// rewrites the encoder input layer and decoder output layer so the model
/// computes the same function of the raw observations wherever the old and
/// new subspaces agree.
void adapt_model_to_projection(model::DdmParams& m, const train::PcaProjection& old_pca,
                               const train::PcaProjection& new_pca);

/// Raw reference observation: the upright pendulum screenshot.
num::Vec reference_frame_pixels(const ExperimentConfig& cfg);

}  // namespace ddmpc::experiment
