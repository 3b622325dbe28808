#include "ddmpc/experiment/tile_study.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ddmpc/io/format.hpp"
#include "ddmpc/mpc/controller.hpp"
#include "ddmpc/train/init.hpp"

namespace ddmpc::experiment {

using model::DdmParams;
using train::Trajectory;

namespace {

struct SplitView {
  Trajectory train;
  Trajectory test;
};

// Time split; the control crossing the boundary is dropped.
SplitView split_by_time(const Trajectory& raw, num::Index train_frames) {
  SplitView s;
  const num::Index total = raw.frames();
  s.train.observations = raw.observations.leftCols(train_frames);
  s.train.controls = raw.controls.leftCols(train_frames - 1);
  s.test.observations = raw.observations.rightCols(total - train_frames);
  s.test.controls = raw.controls.rightCols(total - train_frames - 1);
  return s;
}

struct KStats {
  double rmse = 0.0;
  double frac2 = 0.0;
  int windows = 0;
};

std::vector<KStats> evaluate_horizons(const DdmParams& params, const train::PcaProjection& pca,
                                      const Trajectory& test_raw, int max_k) {
  const int n = params.history_order;
  const num::Index pixels = test_raw.obs_dim();
  const num::Index T = test_raw.frames();
  const num::Mat test_reduced = train::pca_apply(pca, test_raw.observations);

  std::vector<KStats> stats(static_cast<std::size_t>(max_k) + 1);

  // k = 0: reconstruction of every test frame
  {
    const num::Mat recon_reduced =
        model::decode_batch(params, model::encode_batch(params, test_reduced));
    const num::Mat recon_raw = train::pca_invert(pca, recon_reduced);
    double sq = 0.0;
    int close = 0;
    for (num::Index t = 0; t < T; ++t) {
      sq += (recon_raw.col(t) - test_raw.observations.col(t)).squaredNorm();
      const auto est = sim::estimate_tile_center(recon_raw.col(t));
      const auto truth = sim::estimate_tile_center(test_raw.observations.col(t));
      const double err = std::hypot(est.x - truth.x, est.y - truth.y);
      if (err <= 2.0) ++close;
    }
    stats[0].windows = static_cast<int>(T);
    stats[0].rmse = std::sqrt(sq / (static_cast<double>(T) * pixels));
    stats[0].frac2 = static_cast<double>(close) / static_cast<double>(T);
  }

  const num::Mat encoded = model::encode_batch(params, test_reduced);
  for (int k = 1; k <= max_k; ++k) {
    double sq = 0.0;
    int close = 0;
    int windows = 0;
    for (num::Index t = n - 1; t + k < T; ++t) {
      model::HistoryState state;
      for (int i = 0; i < n; ++i) state.features.push_back(encoded.col(t - i));
      for (int i = 1; i < n; ++i) state.controls.push_back(test_raw.controls.col(t - i));

      std::vector<num::Vec> controls;
      controls.reserve(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) controls.push_back(test_raw.controls.col(t + j));

      const auto features = model::rollout_features(params, state, controls);
      const num::Vec pred_raw = train::pca_invert(pca, model::decode(params, features.back()));
      sq += (pred_raw - test_raw.observations.col(t + k)).squaredNorm();
      const auto est = sim::estimate_tile_center(pred_raw);
      const auto truth = sim::estimate_tile_center(test_raw.observations.col(t + k));
      if (std::hypot(est.x - truth.x, est.y - truth.y) <= 2.0) ++close;
      ++windows;
    }
    stats[static_cast<std::size_t>(k)].windows = windows;
    stats[static_cast<std::size_t>(k)].rmse =
        windows > 0 ? std::sqrt(sq / (static_cast<double>(windows) * pixels)) : 0.0;
    stats[static_cast<std::size_t>(k)].frac2 =
        windows > 0 ? static_cast<double>(close) / windows : 0.0;
  }
  return stats;
}

sim::ImageFrame frame_from_raw(num::Vec raw) {
  sim::ImageFrame f;
  f.width = sim::kImageSize;
  f.height = sim::kImageSize;
  f.pixels = raw.cwiseMax(0.0).cwiseMin(1.0);
  return f;
}

}  // namespace

TileStudyResult run_tile_study(const TileStudyConfig& cfg) {
  cfg.validate();
  const num::Rng root(cfg.seed);
  num::Rng data_rng = root.split(0);
  num::Rng init_rng = root.split(1);

  TileStudyResult res;
  res.raw = sim::generate_tile_dataset(data_rng, cfg.frames);
  res.train_frames = static_cast<num::Index>(std::floor(cfg.frames * cfg.train_fraction));
  if (res.train_frames < 2 || res.train_frames + cfg.history_order + cfg.eval_horizon >=
                                  static_cast<num::Index>(cfg.frames)) {
    throw std::invalid_argument("run_tile_study: split leaves too little train or test data");
  }

  const SplitView split = split_by_time(res.raw, res.train_frames);
  res.pca = train::pca_fit(split.train.observations, cfg.pca_dim);

  train::Dataset train_ds;
  train_ds.trajectories.push_back(
      {train::pca_apply(res.pca, split.train.observations), split.train.controls});

  const DdmParams params0 =
      train::pca_init(cfg.encoder_sizes, cfg.predictor_sizes, cfg.history_order, 2,
                      train_ds.trajectories.front().observations, init_rng);

  std::tie(res.joint_model, res.joint_report) =
      train::train_joint(params0, train_ds, cfg.training);
  std::tie(res.sequential_model, res.sequential_report) =
      train::train_sequential(params0, train_ds, cfg.training);

  const auto joint_stats =
      evaluate_horizons(res.joint_model, res.pca, split.test, cfg.eval_horizon);
  const auto seq_stats =
      evaluate_horizons(res.sequential_model, res.pca, split.test, cfg.eval_horizon);

  res.rows.resize(joint_stats.size());
  for (std::size_t k = 0; k < joint_stats.size(); ++k) {
    res.rows[k].k = static_cast<int>(k);
    res.rows[k].rmse_joint = joint_stats[k].rmse;
    res.rows[k].rmse_sequential = seq_stats[k].rmse;
    res.rows[k].frac_within_2px_joint = joint_stats[k].frac2;
    res.rows[k].frac_within_2px_sequential = seq_stats[k].frac2;
    res.rows[k].windows = joint_stats[k].windows;
  }
  return res;
}

void write_tile_report_csv(const std::filesystem::path& path, const TileStudyResult& res) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_tile_report_csv: cannot open " + path.string());
  out << "k,windows,rmse_joint,rmse_sequential,frac_within_2px_joint,"
         "frac_within_2px_sequential\n";
  for (const auto& r : res.rows) {
    out << r.k << "," << r.windows << "," << io::format_g17(r.rmse_joint) << ","
        << io::format_g17(r.rmse_sequential) << "," << io::format_g17(r.frac_within_2px_joint)
        << "," << io::format_g17(r.frac_within_2px_sequential) << "\n";
  }
}

sim::ImageFrame feature_grid_image(const DdmParams& params, const train::PcaProjection& pca,
                                   int grid_n) {
  if (params.feature_dim() != 2) {
    throw std::invalid_argument("feature_grid_image: needs a 2-dimensional feature space");
  }
  if (grid_n < 1) throw std::invalid_argument("feature_grid_image: grid_n must be >= 1");
  const int cell = sim::kImageSize;
  const int total = grid_n * (cell + 1) - 1;
  sim::ImageFrame grid = sim::ImageFrame::blank(total, total, 0.5);
  for (int gy = 0; gy < grid_n; ++gy) {
    for (int gx = 0; gx < grid_n; ++gx) {
      num::Vec z(2);
      z[0] = grid_n == 1 ? 0.0 : -1.0 + 2.0 * gx / (grid_n - 1);
      z[1] = grid_n == 1 ? 0.0 : 1.0 - 2.0 * gy / (grid_n - 1);
      const sim::ImageFrame cell_img =
          frame_from_raw(train::pca_invert(pca, model::decode(params, z)));
      const int r0 = gy * (cell + 1);
      const int c0 = gx * (cell + 1);
      for (int r = 0; r < cell; ++r) {
        for (int c = 0; c < cell; ++c) grid.at(r0 + r, c0 + c) = cell_img.at(r, c);
      }
    }
  }
  return grid;
}

PredictionStrip tile_prediction_strip(const TileStudyResult& res, const DdmParams& params,
                                      int window_index, int steps) {
  const int n = params.history_order;
  const SplitView split = split_by_time(res.raw, res.train_frames);
  const num::Mat test_reduced = train::pca_apply(res.pca, split.test.observations);
  const num::Index t = n - 1 + window_index;
  if (window_index < 0 || t + steps >= split.test.frames()) {
    throw std::invalid_argument("tile_prediction_strip: window out of range");
  }

  model::HistoryState state;
  for (int i = 0; i < n; ++i) {
    state.features.push_back(model::encode(params, test_reduced.col(t - i)));
  }
  for (int i = 1; i < n; ++i) state.controls.push_back(split.test.controls.col(t - i));
  std::vector<num::Vec> controls;
  for (int j = 0; j < steps; ++j) controls.push_back(split.test.controls.col(t + j));
  const auto features = model::rollout_features(params, state, controls);

  std::vector<sim::ImageFrame> truth, pred;
  for (int j = 1; j <= steps; ++j) {
    truth.push_back(frame_from_raw(split.test.observations.col(t + j)));
    pred.push_back(frame_from_raw(
        train::pca_invert(res.pca, model::decode(params, features[static_cast<std::size_t>(j - 1)]))));
  }
  return {sim::hstack_frames(truth), sim::hstack_frames(pred)};
}

}  // namespace ddmpc::experiment
