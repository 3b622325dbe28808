#pragma once

#include "ddmpc/model/forward.hpp"
#include "ddmpc/train/dataset.hpp"

namespace ddmpc::train {

enum class TrainingMode {
  joint,             // V_R + V_P over (theta_E, theta_D, theta_P)
  autoencoder_only,  // V_R over (theta_E, theta_D)
  predictor_only,    // V_P over theta_P, encoder/decoder frozen
};

struct JointCostResult {
  double value = 0.0;
  num::Vec gradient;
  double reconstruction = 0.0;  // V_R
  double prediction = 0.0;      // V_P
};

/// Sum-of-squares training objective: V_R over every frame (trajectory frames
/// plus reference frames) and V_P over every n-step history window inside a
/// trajectory. Windows never span trajectory boundaries; reference frames
/// never enter V_P. Gradients are exact analytic backpropagation; the encoder
/// receives contributions through both the reconstruction path and the
/// prediction path's encoded histories.
class JointObjective {
 public:
  JointObjective(model::DdmParams shape, const Dataset& data,
                 TrainingMode mode = TrainingMode::joint, double prediction_weight = 1.0);

  num::Index dim() const { return flat_dim_; }
  num::Vec initial_flat() const;

  /// L-BFGS-compatible evaluation; also records the loss split.
  double evaluate(const num::Vec& flat, num::Vec& grad);

  double last_reconstruction() const { return last_v_r_; }
  double last_prediction() const { return last_v_p_; }
  num::Index window_count() const { return static_cast<num::Index>(windows_.size()); }

  /// Parameter struct with the optimized blocks replaced by `flat`.
  model::DdmParams params_with(const num::Vec& flat) const;

  /// One-shot cost with the full-parameter gradient.
  static JointCostResult joint_cost(const model::DdmParams& params, const Dataset& data,
                                    double prediction_weight = 1.0);

 private:
  struct Window {
    num::Index target_col;           // column in frames_ to predict
    std::vector<num::Index> z_cols;  // history feature columns, newest first
  };

  model::DdmParams shape_;
  TrainingMode mode_;
  double prediction_weight_;
  num::Index flat_dim_ = 0;

  num::Mat frames_;  // trajectory frames then reference frames, one per column
  num::Index traj_frames_ = 0;
  std::vector<Window> windows_;
  num::Mat predictor_inputs_;  // control slots prefilled, feature slots per eval
  num::Mat targets_;

  double last_v_r_ = 0.0;
  double last_v_p_ = 0.0;
};

}  // namespace ddmpc::train
