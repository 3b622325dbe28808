#pragma once

#include <cstdint>

#include "ddmpc/io/config_file.hpp"
#include "ddmpc/mpc/controller.hpp"
#include "ddmpc/sim/pendulum.hpp"
#include "ddmpc/train/trainer.hpp"

namespace ddmpc::experiment {

/// Pendulum policy-learning experiment: an initial random trial followed by
/// `trials` rounds of retrain / epsilon-greedy trial / greedy evaluation.
struct ExperimentConfig {
  int trials = 15;
  int frames_per_trial = 100;
  std::vector<num::Index> encoder_sizes{50, 25, 12, 6, 2};
  std::vector<num::Index> predictor_sizes{6, 4, 2};
  int history_order = 2;
  num::Index pca_dim = 50;
  bool pca_refit = true;  // refit the projection on all data after each trial
  mpc::MpcConfig mpc;
  train::TrainOptions training;
  sim::PendulumConfig pendulum;
  std::uint64_t seed = 0;

  void validate() const;
};

ExperimentConfig experiment_config_from(const io::ConfigFile& file);
void experiment_config_to(const ExperimentConfig& cfg, io::ConfigFile& file);

struct TileStudyConfig {
  int frames = 601;
  double train_fraction = 0.8;
  std::vector<num::Index> encoder_sizes{50, 25, 12, 6, 2};
  std::vector<num::Index> predictor_sizes{8, 4, 2};
  int history_order = 2;
  num::Index pca_dim = 50;
  int eval_horizon = 8;
  train::TrainOptions training;  // 300 iterations by default
  std::uint64_t seed = 0;

  TileStudyConfig() { training.optimizer.max_iterations = 300; }
  void validate() const;
};

TileStudyConfig tile_config_from(const io::ConfigFile& file);
void tile_config_to(const TileStudyConfig& cfg, io::ConfigFile& file);

}  // namespace ddmpc::experiment
