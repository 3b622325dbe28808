#pragma once

#include <vector>

#include "ddmpc/model/params.hpp"

namespace ddmpc::model {

/// Per-layer activations recorded during a forward pass, for backprop.
/// inputs[k] is the input of layer k; inputs.back() is the network output.
struct MlpCache {
  std::vector<num::Mat> inputs;
  std::vector<num::Mat> preacts;
};

/// Batched forward pass, one sample per column.
num::Mat mlp_forward(const MlpParams& mlp, num::Mat x, MlpCache* cache = nullptr);

/// Backpropagate the output adjoint `dout`; accumulates parameter gradients
/// into `grads` when non-null and returns the input adjoint.
num::Mat mlp_backward(const MlpParams& mlp, const MlpCache& cache, num::Mat dout,
                      MlpParams* grads);

/// MPC state (the paper's x_t): the n most recent features, newest first,
/// and the n-1 most recent controls, newest first.
struct HistoryState {
  std::vector<num::Vec> features;  // z_t, z_{t-1}, ..., z_{t-n+1}
  std::vector<num::Vec> controls;  // u_{t-1}, ..., u_{t-n+1}

  /// Shift a new feature and the control that produced it into the history.
  void advance(num::Vec z_next, const num::Vec& u_applied);
  void validate(int n, num::Index m, num::Index control_dim) const;
};

/// Predictor input vector, concatenated as (z_t, u_t, z_{t-1}, u_{t-1}, ...).
num::Vec predictor_input(const DdmParams& p, const HistoryState& state, const num::Vec& u_t);

num::Vec encode(const DdmParams& p, const num::Vec& y);
num::Mat encode_batch(const DdmParams& p, const num::Mat& ys);
num::Vec decode(const DdmParams& p, const num::Vec& z);
num::Mat decode_batch(const DdmParams& p, const num::Mat& zs);

/// y - decode(encode(y))
num::Vec reconstruction_error(const DdmParams& p, const num::Vec& y);

num::Vec predict_feature(const DdmParams& p, const HistoryState& state, const num::Vec& u_t);
num::Vec predict_observation(const DdmParams& p, const HistoryState& state,
                             const num::Vec& u_t);

/// Open-loop feature rollout: element k is the predicted feature after
/// applying controls[0..k]. Predicted features (never ground truth) are
/// shifted into the history.
std::vector<num::Vec> rollout_features(const DdmParams& p, HistoryState state,
                                       const std::vector<num::Vec>& controls);

}  // namespace ddmpc::model
