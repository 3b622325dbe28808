#include "ddmpc/experiment/experiment.hpp"

#include <cmath>

#include "ddmpc/train/init.hpp"

namespace ddmpc::experiment {

using model::DdmParams;
using train::PcaProjection;
using train::Trajectory;

bool stabilized_at_upright(const std::vector<double>& angles, int tail, double tol_rad) {
  if (static_cast<int>(angles.size()) < tail) return false;
  for (std::size_t i = angles.size() - static_cast<std::size_t>(tail); i < angles.size(); ++i) {
    if (sim::upright_error(angles[i]) > tol_rad) return false;
  }
  return true;
}

num::Vec reference_frame_pixels(const ExperimentConfig& cfg) {
  return sim::render_pendulum({sim::wrap_angle(std::numbers::pi), 0.0}, cfg.pendulum).pixels;
}

namespace {

double tail_error(const std::vector<double>& angles, int tail = 10) {
  const std::size_t count = std::min<std::size_t>(angles.size(), static_cast<std::size_t>(tail));
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (std::size_t i = angles.size() - count; i < angles.size(); ++i) {
    sum += sim::upright_error(angles[i]);
  }
  return sum / static_cast<double>(count);
}

num::Mat collect_raw_frames(const train::Dataset& raw, const num::Vec& ref) {
  num::Index total = 0;
  for (const auto& t : raw.trajectories) total += t.frames();
  num::Mat all(ref.size(), total + 1);
  num::Index col = 0;
  for (const auto& t : raw.trajectories) {
    all.middleCols(col, t.frames()) = t.observations;
    col += t.frames();
  }
  all.col(col) = ref;
  return all;
}

}  // namespace

void adapt_model_to_projection(DdmParams& m, const PcaProjection& old_pca,
                               const PcaProjection& new_pca) {
  const num::Mat rot = old_pca.basis.transpose() * new_pca.basis;
  auto& enc = m.encoder.layers.front();
  enc.bias += enc.weight * (old_pca.basis.transpose() * (new_pca.mean - old_pca.mean));
  enc.weight = enc.weight * rot;
  auto& dec = m.decoder.layers.back();
  dec.bias =
      rot.transpose() * dec.bias + new_pca.basis.transpose() * (old_pca.mean - new_pca.mean);
  dec.weight = rot.transpose() * dec.weight;
}

Trajectory run_random_trial(const ExperimentConfig& cfg, num::Rng& rng,
                            std::vector<double>* angles_out) {
  const int frames = cfg.frames_per_trial;
  sim::PendulumState s{};
  Trajectory traj;
  traj.observations.resize(static_cast<num::Index>(sim::kImageSize) * sim::kImageSize, frames);
  traj.controls.resize(1, std::max(frames - 1, 0));
  traj.observations.col(0) = sim::render_pendulum(s, cfg.pendulum).pixels;
  if (angles_out) angles_out->push_back(s.angle);
  for (int t = 0; t + 1 < frames; ++t) {
    const double u = rng.uniform(-cfg.pendulum.torque_limit, cfg.pendulum.torque_limit);
    traj.controls(0, t) = u;
    s = sim::pendulum_step(s, u, cfg.pendulum);
    traj.observations.col(t + 1) = sim::render_pendulum(s, cfg.pendulum).pixels;
    if (angles_out) angles_out->push_back(s.angle);
  }
  return traj;
}

Trajectory run_mpc_trial(const DdmParams& params, const PcaProjection& pca,
                         const num::Vec& z_ref, const ExperimentConfig& cfg, double epsilon,
                         num::Rng& rng, std::vector<double>* angles_out) {
  mpc::MpcConfig mcfg = cfg.mpc;
  mcfg.epsilon = epsilon;
  const int frames = cfg.frames_per_trial;
  const num::Index fdim = params.control_dim;

  sim::PendulumState s{};
  Trajectory traj;
  traj.observations.resize(static_cast<num::Index>(sim::kImageSize) * sim::kImageSize, frames);
  traj.controls.resize(fdim, std::max(frames - 1, 0));

  sim::ImageFrame frame = sim::render_pendulum(s, cfg.pendulum);
  traj.observations.col(0) = frame.pixels;
  if (angles_out) angles_out->push_back(s.angle);

  num::Vec z = model::encode(params, train::pca_apply(pca, frame.pixels));
  model::HistoryState hist;
  hist.features.assign(static_cast<std::size_t>(params.history_order), z);
  hist.controls.assign(static_cast<std::size_t>(params.history_order - 1),
                       num::Vec::Zero(fdim));

  mpc::Plan prev;
  bool have_prev = false;
  for (int t = 0; t + 1 < frames; ++t) {
    const mpc::Plan p = mpc::plan(params, hist, z_ref, mcfg, have_prev ? &prev : nullptr,
                                  have_prev ? nullptr : &rng);
    const mpc::Action action = mpc::epsilon_greedy_action(p, mcfg, rng);
    traj.controls.col(t) = action.control;
    s = sim::pendulum_step(s, action.control[0], cfg.pendulum);
    frame = sim::render_pendulum(s, cfg.pendulum);
    traj.observations.col(t + 1) = frame.pixels;
    if (angles_out) angles_out->push_back(s.angle);
    z = model::encode(params, train::pca_apply(pca, frame.pixels));
    hist.advance(std::move(z), action.control);
    prev = p;
    have_prev = true;
  }
  return traj;
}

EvalOutcome evaluate_greedy(const DdmParams& params, const PcaProjection& pca,
                            const ExperimentConfig& cfg, num::Rng rng) {
  const num::Vec ref = reference_frame_pixels(cfg);
  const num::Vec z_ref = model::encode(params, train::pca_apply(pca, ref));
  EvalOutcome out;
  run_mpc_trial(params, pca, z_ref, cfg, 0.0, rng, &out.angles);
  out.success = stabilized_at_upright(out.angles);
  out.final_angle = out.angles.empty() ? 0.0 : out.angles.back();
  out.mean_tail_error = tail_error(out.angles);
  return out;
}

ExperimentResult run_learning_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const num::Rng root(cfg.seed);
  num::Rng random_trial_rng = root.split(0);
  num::Rng init_rng = root.split(1);

  const num::Vec ref_raw = reference_frame_pixels(cfg);

  ExperimentResult result;
  result.curve.seed = cfg.seed;

  train::Dataset raw_data;
  {
    std::vector<double> angles;
    raw_data.trajectories.push_back(run_random_trial(cfg, random_trial_rng, &angles));
    TrialRecord rec;
    rec.trial = 0;
    rec.frames_seen = 0;
    rec.success = stabilized_at_upright(angles);
    rec.final_angle = angles.empty() ? 0.0 : angles.back();
    rec.mean_tail_error = tail_error(angles);
    rec.angles = std::move(angles);
    result.curve.records.push_back(std::move(rec));
  }

  DdmParams model;
  PcaProjection pca;
  bool have_model = false;

  for (int trial = 1; trial <= cfg.trials; ++trial) {
    // projection refit on everything collected so far, reference included
    if (!have_model || cfg.pca_refit) {
      PcaProjection next = train::pca_fit(collect_raw_frames(raw_data, ref_raw), cfg.pca_dim);
      if (have_model) adapt_model_to_projection(model, pca, next);
      pca = std::move(next);
    }

    train::Dataset reduced;
    reduced.trajectories.reserve(raw_data.trajectories.size());
    for (const auto& t : raw_data.trajectories) {
      reduced.trajectories.push_back({train::pca_apply(pca, t.observations), t.controls});
    }
    reduced.reference_frames.push_back(train::pca_apply(pca, ref_raw));

    if (!have_model) {
      const auto& first = reduced.trajectories.front();
      num::Mat all(first.observations.rows(), first.frames() + 1);
      all.leftCols(first.frames()) = first.observations;
      all.col(first.frames()) = reduced.reference_frames.front();
      model = train::pca_init(cfg.encoder_sizes, cfg.predictor_sizes, cfg.history_order,
                              cfg.mpc.u_min.size(), all, init_rng);
    }

    train::TrainReport report;
    std::tie(model, report) = train::train_joint(model, reduced, cfg.training);
    have_model = true;

    const num::Vec z_ref = model::encode(model, train::pca_apply(pca, ref_raw));

    num::Rng trial_rng = root.split(1000 + 2 * static_cast<std::uint64_t>(trial));
    raw_data.trajectories.push_back(
        run_mpc_trial(model, pca, z_ref, cfg, cfg.mpc.epsilon, trial_rng));

    num::Rng eval_rng = root.split(1001 + 2 * static_cast<std::uint64_t>(trial));
    EvalOutcome eval = evaluate_greedy(model, pca, cfg, eval_rng);

    TrialRecord rec;
    rec.trial = trial;
    rec.frames_seen = static_cast<long>(trial) * cfg.frames_per_trial;
    rec.success = eval.success;
    rec.final_angle = eval.final_angle;
    rec.mean_tail_error = eval.mean_tail_error;
    rec.v_r = report.reconstruction_loss;
    rec.v_p = report.prediction_loss;
    rec.train_seconds = report.seconds;
    rec.angles = std::move(eval.angles);
    result.curve.records.push_back(std::move(rec));
  }

  if (have_model) {
    result.model = std::move(model);
    result.pca = std::move(pca);
    result.trained = true;
  }
  result.data = std::move(raw_data);
  return result;
}

}  // namespace ddmpc::experiment
