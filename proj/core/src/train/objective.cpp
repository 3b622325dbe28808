#include "ddmpc/train/objective.hpp"

#include <iostream>
#include <stdexcept>

namespace ddmpc::train {

using model::DdmParams;
using model::MlpCache;
using model::MlpParams;

JointObjective::JointObjective(DdmParams shape, const Dataset& data, TrainingMode mode,
                               double prediction_weight)
    : shape_(std::move(shape)), mode_(mode), prediction_weight_(prediction_weight) {
  shape_.validate();
  data.validate();
  if (data.total_frames() == 0) {
    throw std::invalid_argument("JointObjective: empty dataset");
  }
  if (data.obs_dim() != shape_.obs_dim()) {
    throw std::invalid_argument("JointObjective: dataset dims do not match the model");
  }

  const int n = shape_.history_order;
  const num::Index m = shape_.feature_dim();
  const num::Index fdim = shape_.control_dim;

  num::Index total = 0;
  for (const auto& t : data.trajectories) total += t.frames();
  traj_frames_ = total;
  frames_.resize(shape_.obs_dim(), total + static_cast<num::Index>(data.reference_frames.size()));

  num::Index col = 0;
  int short_trajectories = 0;
  std::vector<std::pair<num::Index, num::Index>> controls;  // (traj, control col) per window slot
  for (const auto& traj : data.trajectories) {
    const num::Index T = traj.frames();
    frames_.middleCols(col, T) = traj.observations;
    if (traj.control_dim() != fdim && T > 1) {
      throw std::invalid_argument("JointObjective: control dim does not match the model");
    }
    if (T >= n + 1) {
      // windows at times t = n-1 .. T-2 (0-based), predicting frame t+1
      for (num::Index t = n - 1; t + 1 < T; ++t) {
        Window w;
        w.target_col = col + t + 1;
        for (int i = 0; i < n; ++i) w.z_cols.push_back(col + t - i);
        windows_.push_back(std::move(w));
      }
    } else {
      ++short_trajectories;
    }
    col += T;
  }
  for (std::size_t r = 0; r < data.reference_frames.size(); ++r) {
    frames_.col(traj_frames_ + static_cast<num::Index>(r)) = data.reference_frames[r];
  }
  if (short_trajectories > 0) {
    std::cerr << "warning: " << short_trajectories
              << " trajectory(ies) shorter than n+1 frames excluded from the prediction loss\n";
  }

  const auto window_count = static_cast<num::Index>(windows_.size());
  predictor_inputs_.resize(shape_.predictor_input_dim(), window_count);
  targets_.resize(shape_.obs_dim(), window_count);
  // control slots never change across evaluations
  num::Index w_idx = 0;
  for (const auto& traj : data.trajectories) {
    const num::Index T = traj.frames();
    if (T < n + 1) continue;
    for (num::Index t = n - 1; t + 1 < T; ++t) {
      targets_.col(w_idx) = traj.observations.col(t + 1);
      for (int i = 0; i < n; ++i) {
        predictor_inputs_.block(static_cast<num::Index>(i) * (m + fdim) + m, w_idx, fdim, 1) =
            traj.controls.col(t - i);
      }
      ++w_idx;
    }
  }

  switch (mode_) {
    case TrainingMode::joint:
      flat_dim_ = model::param_count(shape_);
      break;
    case TrainingMode::autoencoder_only:
      flat_dim_ = model::mlp_param_count(shape_.encoder) + model::mlp_param_count(shape_.decoder);
      break;
    case TrainingMode::predictor_only:
      flat_dim_ = model::mlp_param_count(shape_.predictor);
      break;
  }
}

num::Vec JointObjective::initial_flat() const {
  num::Vec flat(flat_dim_);
  num::Index offset = 0;
  switch (mode_) {
    case TrainingMode::joint:
      model::mlp_flatten_into(shape_.encoder, flat, offset);
      model::mlp_flatten_into(shape_.decoder, flat, offset);
      model::mlp_flatten_into(shape_.predictor, flat, offset);
      break;
    case TrainingMode::autoencoder_only:
      model::mlp_flatten_into(shape_.encoder, flat, offset);
      model::mlp_flatten_into(shape_.decoder, flat, offset);
      break;
    case TrainingMode::predictor_only:
      model::mlp_flatten_into(shape_.predictor, flat, offset);
      break;
  }
  return flat;
}

DdmParams JointObjective::params_with(const num::Vec& flat) const {
  if (flat.size() != flat_dim_) {
    throw std::invalid_argument("JointObjective: flat parameter size mismatch");
  }
  DdmParams p = shape_;
  num::Index offset = 0;
  switch (mode_) {
    case TrainingMode::joint:
      model::mlp_unflatten_from(flat, offset, p.encoder);
      model::mlp_unflatten_from(flat, offset, p.decoder);
      model::mlp_unflatten_from(flat, offset, p.predictor);
      break;
    case TrainingMode::autoencoder_only:
      model::mlp_unflatten_from(flat, offset, p.encoder);
      model::mlp_unflatten_from(flat, offset, p.decoder);
      break;
    case TrainingMode::predictor_only:
      model::mlp_unflatten_from(flat, offset, p.predictor);
      break;
  }
  return p;
}

double JointObjective::evaluate(const num::Vec& flat, num::Vec& grad) {
  const DdmParams p = params_with(flat);
  const int n = p.history_order;
  const num::Index m = p.feature_dim();
  const num::Index fdim = p.control_dim;
  const bool ae_params = mode_ != TrainingMode::predictor_only;
  const bool pred_loss = mode_ != TrainingMode::autoencoder_only;
  const bool pred_params = mode_ != TrainingMode::autoencoder_only;

  MlpParams enc_grads = model::make_zero_grads(p.encoder);
  MlpParams dec_grads = model::make_zero_grads(p.decoder);
  MlpParams pred_grads = model::make_zero_grads(p.predictor);

  // reconstruction path over every frame
  MlpCache enc_cache, dec_cache;
  const num::Mat z = model::mlp_forward(p.encoder, frames_, &enc_cache);
  const num::Mat recon = model::mlp_forward(p.decoder, z, &dec_cache);
  const num::Mat resid_r = frames_ - recon;
  last_v_r_ = resid_r.squaredNorm();

  num::Mat dz = num::Mat::Zero(m, frames_.cols());
  if (mode_ != TrainingMode::predictor_only) {
    dz = model::mlp_backward(p.decoder, dec_cache, -2.0 * resid_r,
                             ae_params ? &dec_grads : nullptr);
  }

  // prediction path over the history windows
  last_v_p_ = 0.0;
  if (pred_loss && !windows_.empty()) {
    const auto window_count = static_cast<num::Index>(windows_.size());
    for (num::Index w = 0; w < window_count; ++w) {
      for (int i = 0; i < n; ++i) {
        predictor_inputs_.block(static_cast<num::Index>(i) * (m + fdim), w, m, 1) =
            z.col(windows_[static_cast<std::size_t>(w)].z_cols[static_cast<std::size_t>(i)]);
      }
    }
    MlpCache pred_cache, dec2_cache;
    const num::Mat z_next = model::mlp_forward(p.predictor, predictor_inputs_, &pred_cache);
    const num::Mat y_next = model::mlp_forward(p.decoder, z_next, &dec2_cache);
    const num::Mat resid_p = targets_ - y_next;
    last_v_p_ = resid_p.squaredNorm();

    const num::Mat dz_next =
        model::mlp_backward(p.decoder, dec2_cache, (-2.0 * prediction_weight_) * resid_p,
                            (mode_ == TrainingMode::joint) ? &dec_grads : nullptr);
    const num::Mat dv = model::mlp_backward(p.predictor, pred_cache, dz_next,
                                            pred_params ? &pred_grads : nullptr);
    if (mode_ == TrainingMode::joint) {
      for (num::Index w = 0; w < window_count; ++w) {
        for (int i = 0; i < n; ++i) {
          dz.col(windows_[static_cast<std::size_t>(w)].z_cols[static_cast<std::size_t>(i)]) +=
              dv.block(static_cast<num::Index>(i) * (m + fdim), w, m, 1);
        }
      }
    }
  }

  if (ae_params) {
    model::mlp_backward(p.encoder, enc_cache, dz, &enc_grads);
  }

  grad.resize(flat_dim_);
  num::Index offset = 0;
  switch (mode_) {
    case TrainingMode::joint:
      model::mlp_flatten_into(enc_grads, grad, offset);
      model::mlp_flatten_into(dec_grads, grad, offset);
      model::mlp_flatten_into(pred_grads, grad, offset);
      break;
    case TrainingMode::autoencoder_only:
      model::mlp_flatten_into(enc_grads, grad, offset);
      model::mlp_flatten_into(dec_grads, grad, offset);
      break;
    case TrainingMode::predictor_only:
      model::mlp_flatten_into(pred_grads, grad, offset);
      break;
  }

  switch (mode_) {
    case TrainingMode::joint: return last_v_r_ + prediction_weight_ * last_v_p_;
    case TrainingMode::autoencoder_only: return last_v_r_;
    case TrainingMode::predictor_only: return prediction_weight_ * last_v_p_;
  }
  throw std::logic_error("JointObjective: unknown mode");
}

JointCostResult JointObjective::joint_cost(const DdmParams& params, const Dataset& data,
                                           double prediction_weight) {
  JointObjective obj(params, data, TrainingMode::joint, prediction_weight);
  JointCostResult r;
  r.value = obj.evaluate(obj.initial_flat(), r.gradient);
  r.reconstruction = obj.last_reconstruction();
  r.prediction = obj.last_prediction();
  return r;
}

}  // namespace ddmpc::train
