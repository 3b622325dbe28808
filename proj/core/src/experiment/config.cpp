#include "ddmpc/experiment/config.hpp"

#include <stdexcept>

namespace ddmpc::experiment {

void ExperimentConfig::validate() const {
  if (trials < 0) throw std::invalid_argument("ExperimentConfig: trials must be >= 0");
  if (frames_per_trial < 1) {
    throw std::invalid_argument("ExperimentConfig: frames_per_trial must be >= 1");
  }
  if (history_order < 1) throw std::invalid_argument("ExperimentConfig: history order >= 1");
  if (encoder_sizes.size() < 2) throw std::invalid_argument("ExperimentConfig: encoder sizes");
  if (encoder_sizes.front() != pca_dim) {
    throw std::invalid_argument("ExperimentConfig: encoder input must equal pca_dim");
  }
  const num::Index m = encoder_sizes.back();
  const num::Index fdim = mpc.u_min.size();
  if (predictor_sizes.front() != history_order * (m + fdim) || predictor_sizes.back() != m) {
    throw std::invalid_argument(
        "ExperimentConfig: predictor sizes must run from n*(m+F) to m");
  }
  mpc.validate();
  training.optimizer.validate();
  pendulum.validate();
}

ExperimentConfig experiment_config_from(const io::ConfigFile& f) {
  ExperimentConfig c;
  c.trials = f.get_int("experiment.trials", c.trials);
  c.frames_per_trial = f.get_int("experiment.frames_per_trial", c.frames_per_trial);
  c.encoder_sizes = f.get_sizes("experiment.encoder_sizes", c.encoder_sizes);
  c.predictor_sizes = f.get_sizes("experiment.predictor_sizes", c.predictor_sizes);
  c.history_order = f.get_int("experiment.history_order", c.history_order);
  c.pca_dim = f.get_int("experiment.pca_dim", static_cast<int>(c.pca_dim));
  c.pca_refit = f.get_bool("experiment.pca_refit", c.pca_refit);
  c.seed = f.get_u64("experiment.seed", c.seed);
  c.training.optimizer.max_iterations =
      f.get_int("experiment.train_iterations", c.training.optimizer.max_iterations);
  c.training.optimizer.memory_pairs =
      f.get_int("experiment.train_memory", c.training.optimizer.memory_pairs);
  c.training.prediction_weight =
      f.get_double("experiment.prediction_weight", c.training.prediction_weight);

  c.pendulum.mass = f.get_double("pendulum.mass", c.pendulum.mass);
  c.pendulum.length = f.get_double("pendulum.length", c.pendulum.length);
  c.pendulum.friction = f.get_double("pendulum.friction", c.pendulum.friction);
  c.pendulum.gravity = f.get_double("pendulum.gravity", c.pendulum.gravity);
  c.pendulum.torque_limit = f.get_double("pendulum.torque_limit", c.pendulum.torque_limit);
  c.pendulum.dt = f.get_double("pendulum.dt", c.pendulum.dt);
  c.pendulum.substeps = f.get_int("pendulum.substeps", c.pendulum.substeps);

  c.mpc.horizon = f.get_int("mpc.horizon", c.mpc.horizon);
  c.mpc.control_penalty = f.get_double("mpc.lambda", c.mpc.control_penalty);
  c.mpc.epsilon = f.get_double("mpc.epsilon", c.mpc.epsilon);
  c.mpc.planner.max_iterations =
      f.get_int("mpc.planner_iterations", c.mpc.planner.max_iterations);
  c.mpc.u_min = num::Vec::Constant(1, -c.pendulum.torque_limit);
  c.mpc.u_max = num::Vec::Constant(1, c.pendulum.torque_limit);
  return c;
}

void experiment_config_to(const ExperimentConfig& c, io::ConfigFile& f) {
  f.set_int("experiment.trials", c.trials);
  f.set_int("experiment.frames_per_trial", c.frames_per_trial);
  f.set_sizes("experiment.encoder_sizes", c.encoder_sizes);
  f.set_sizes("experiment.predictor_sizes", c.predictor_sizes);
  f.set_int("experiment.history_order", c.history_order);
  f.set_int("experiment.pca_dim", c.pca_dim);
  f.set_bool("experiment.pca_refit", c.pca_refit);
  f.set_u64("experiment.seed", c.seed);
  f.set_int("experiment.train_iterations", c.training.optimizer.max_iterations);
  f.set_int("experiment.train_memory", c.training.optimizer.memory_pairs);
  f.set_double("experiment.prediction_weight", c.training.prediction_weight);

  f.set_double("pendulum.mass", c.pendulum.mass);
  f.set_double("pendulum.length", c.pendulum.length);
  f.set_double("pendulum.friction", c.pendulum.friction);
  f.set_double("pendulum.gravity", c.pendulum.gravity);
  f.set_double("pendulum.torque_limit", c.pendulum.torque_limit);
  f.set_double("pendulum.dt", c.pendulum.dt);
  f.set_int("pendulum.substeps", c.pendulum.substeps);

  f.set_int("mpc.horizon", c.mpc.horizon);
  f.set_double("mpc.lambda", c.mpc.control_penalty);
  f.set_double("mpc.epsilon", c.mpc.epsilon);
  f.set_int("mpc.planner_iterations", c.mpc.planner.max_iterations);
}

void TileStudyConfig::validate() const {
  if (frames < 2) throw std::invalid_argument("TileStudyConfig: frames must be >= 2");
  if (!(train_fraction > 0 && train_fraction < 1)) {
    throw std::invalid_argument("TileStudyConfig: train_fraction in (0,1)");
  }
  if (eval_horizon < 1) throw std::invalid_argument("TileStudyConfig: eval_horizon >= 1");
  if (encoder_sizes.front() != pca_dim) {
    throw std::invalid_argument("TileStudyConfig: encoder input must equal pca_dim");
  }
  const num::Index m = encoder_sizes.back();
  if (predictor_sizes.front() != history_order * (m + 2) || predictor_sizes.back() != m) {
    throw std::invalid_argument("TileStudyConfig: predictor sizes must run from n*(m+2) to m");
  }
  training.optimizer.validate();
}

TileStudyConfig tile_config_from(const io::ConfigFile& f) {
  TileStudyConfig c;
  c.frames = f.get_int("tile.frames", c.frames);
  c.train_fraction = f.get_double("tile.train_fraction", c.train_fraction);
  c.encoder_sizes = f.get_sizes("tile.encoder_sizes", c.encoder_sizes);
  c.predictor_sizes = f.get_sizes("tile.predictor_sizes", c.predictor_sizes);
  c.history_order = f.get_int("tile.history_order", c.history_order);
  c.pca_dim = f.get_int("tile.pca_dim", static_cast<int>(c.pca_dim));
  c.eval_horizon = f.get_int("tile.eval_horizon", c.eval_horizon);
  c.training.optimizer.max_iterations =
      f.get_int("tile.train_iterations", c.training.optimizer.max_iterations);
  c.seed = f.get_u64("tile.seed", c.seed);
  return c;
}

void tile_config_to(const TileStudyConfig& c, io::ConfigFile& f) {
  f.set_int("tile.frames", c.frames);
  f.set_double("tile.train_fraction", c.train_fraction);
  f.set_sizes("tile.encoder_sizes", c.encoder_sizes);
  f.set_sizes("tile.predictor_sizes", c.predictor_sizes);
  f.set_int("tile.history_order", c.history_order);
  f.set_int("tile.pca_dim", c.pca_dim);
  f.set_int("tile.eval_horizon", c.eval_horizon);
  f.set_int("tile.train_iterations", c.training.optimizer.max_iterations);
  f.set_u64("tile.seed", c.seed);
}

}  // namespace ddmpc::experiment
