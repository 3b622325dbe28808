#pragma once

#include "ddmpc/experiment/config.hpp"
#include "ddmpc/sim/tile.hpp"
#include "ddmpc/train/pca.hpp"

namespace ddmpc::experiment {

struct TileRow {
  int k = 0;  // prediction horizon; 0 is plain reconstruction
  double rmse_joint = 0.0;
  double rmse_sequential = 0.0;
  double frac_within_2px_joint = 0.0;
  double frac_within_2px_sequential = 0.0;
  int windows = 0;
};

struct TileStudyResult {
  std::vector<TileRow> rows;  // k = 0 .. eval_horizon
  model::DdmParams joint_model;
  model::DdmParams sequential_model;
  train::PcaProjection pca;
  train::Trajectory raw;  // the full generated tile trajectory
  num::Index train_frames = 0;
  train::TrainReport joint_report;
  train::TrainReport sequential_report;
};

/// The moving-tile prediction study: one random-walk dataset split by time,
/// a jointly trained model against a sequentially trained one, and k-step
/// open-loop pixel RMSE plus tile-position accuracy on held-out windows.
TileStudyResult run_tile_study(const TileStudyConfig& cfg);

void write_tile_report_csv(const std::filesystem::path& path, const TileStudyResult& res);

/// Fig.-style overview: decoded images over a grid of feature-space points in
/// [-1,1]^2 (requires feature dimension 2), pixel values clamped for display.
sim::ImageFrame feature_grid_image(const model::DdmParams& params,
                                   const train::PcaProjection& pca, int grid_n);

/// Ground-truth and predicted k-step strips for one held-out window.
struct PredictionStrip {
  sim::ImageFrame truth;
  sim::ImageFrame predicted;
};
PredictionStrip tile_prediction_strip(const TileStudyResult& res,
                                      const model::DdmParams& params, int window_index,
                                      int steps);

}  // namespace ddmpc::experiment
