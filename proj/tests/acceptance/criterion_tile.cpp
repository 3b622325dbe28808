// Criterion 4: the moving-tile study. A jointly trained model must place the
// tile within 2 px at 8 steps ahead on at least 90% of held-out windows and
// beat sequential training on 8-step pixel RMSE.

#include <sstream>

#include "ddmpc/experiment/tile_study.hpp"
#include "harness.hpp"

using namespace ddmpc;

int run_tile_criterion() {
  experiment::TileStudyConfig cfg;  // 601 frames, 80/20 split, 300 iterations
  cfg.seed = 1;
  const auto res = experiment::run_tile_study(cfg);

  const auto& row8 = res.rows.at(8);
  acceptance::Criterion c{"criterion 4: tile study (8-step accuracy, joint beats sequential)"};
  std::ostringstream detail;
  detail << "8-step within-2px fraction " << row8.frac_within_2px_joint << " over "
         << row8.windows << " windows; rmse joint " << row8.rmse_joint << " vs sequential "
         << row8.rmse_sequential;
  c.detail = detail.str();
  c.pass = row8.frac_within_2px_joint >= 0.9 && row8.rmse_joint < row8.rmse_sequential;
  return acceptance::report({c});
}
