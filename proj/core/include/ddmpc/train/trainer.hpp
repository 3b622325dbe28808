#pragma once

#include "ddmpc/num/lbfgs.hpp"
#include "ddmpc/train/objective.hpp"

namespace ddmpc::train {

struct TrainReport {
  double reconstruction_loss = 0.0;  // V_R at the returned parameters
  double prediction_loss = 0.0;      // V_P at the returned parameters
  int iterations = 0;
  double gradient_norm = 0.0;
  double seconds = 0.0;
  bool line_search_failed = false;
};

struct TrainOptions {
  num::OptimizerOptions optimizer;
  double prediction_weight = 1.0;
};

/// Minimize V_R + V_P jointly over all parameters.
std::pair<model::DdmParams, TrainReport> train_joint(const model::DdmParams& params0,
                                                     const Dataset& data,
                                                     const TrainOptions& opts = {});

/// Two-stage baseline: first V_R over the auto-encoder, then V_P over the
/// predictor with the auto-encoder frozen bit-exactly.
std::pair<model::DdmParams, TrainReport> train_sequential(const model::DdmParams& params0,
                                                          const Dataset& data,
                                                          const TrainOptions& opts = {});

}  // namespace ddmpc::train
