#include "ddmpc/model/forward.hpp"

#include <stdexcept>

namespace ddmpc::model {

num::Mat mlp_forward(const MlpParams& mlp, num::Mat x, MlpCache* cache) {
  if (x.rows() != mlp.input_dim()) {
    throw std::invalid_argument("mlp_forward: input dimension mismatch");
  }
  if (cache) {
    cache->inputs.clear();
    cache->preacts.clear();
  }
  for (std::size_t k = 0; k < mlp.layers.size(); ++k) {
    if (cache) cache->inputs.push_back(x);
    num::Mat pre = (mlp.layers[k].weight * x).colwise() + mlp.layers[k].bias;
    if (cache) cache->preacts.push_back(pre);
    activate_inplace(mlp.activations[k], pre);
    x = std::move(pre);
  }
  if (cache) cache->inputs.push_back(x);
  return x;
}

num::Mat mlp_backward(const MlpParams& mlp, const MlpCache& cache, num::Mat dout,
                      MlpParams* grads) {
  for (std::size_t k = mlp.layers.size(); k-- > 0;) {
    const num::Mat dpre =
        dout.array() * activation_slope(mlp.activations[k], cache.preacts[k]).array();
    if (grads) {
      grads->layers[k].weight.noalias() += dpre * cache.inputs[k].transpose();
      grads->layers[k].bias += dpre.rowwise().sum();
    }
    dout.noalias() = mlp.layers[k].weight.transpose() * dpre;
  }
  return dout;
}

void HistoryState::advance(num::Vec z_next, const num::Vec& u_applied) {
  features.insert(features.begin(), std::move(z_next));
  features.pop_back();
  if (!controls.empty()) {
    controls.insert(controls.begin(), u_applied);
    controls.pop_back();
  }
}

void HistoryState::validate(int n, num::Index m, num::Index control_dim) const {
  if (static_cast<int>(features.size()) != n) {
    throw std::invalid_argument("HistoryState: expected n features");
  }
  if (static_cast<int>(controls.size()) != n - 1) {
    throw std::invalid_argument("HistoryState: expected n-1 controls");
  }
  for (const auto& z : features) num::require_dim(z, m, "HistoryState feature");
  for (const auto& u : controls) num::require_dim(u, control_dim, "HistoryState control");
}

num::Vec predictor_input(const DdmParams& p, const HistoryState& state,
                         const num::Vec& u_t) {
  const num::Index m = p.feature_dim();
  const num::Index fdim = p.control_dim;
  state.validate(p.history_order, m, fdim);
  num::require_dim(u_t, fdim, "predictor_input control");

  num::Vec v(p.predictor_input_dim());
  num::Index off = 0;
  for (int i = 0; i < p.history_order; ++i) {
    v.segment(off, m) = state.features[i];
    off += m;
    v.segment(off, fdim) = (i == 0) ? u_t : state.controls[i - 1];
    off += fdim;
  }
  return v;
}

num::Vec encode(const DdmParams& p, const num::Vec& y) {
  num::require_dim(y, p.obs_dim(), "encode input");
  return mlp_forward(p.encoder, y);
}

num::Mat encode_batch(const DdmParams& p, const num::Mat& ys) {
  return mlp_forward(p.encoder, ys);
}

num::Vec decode(const DdmParams& p, const num::Vec& z) {
  num::require_dim(z, p.feature_dim(), "decode input");
  return mlp_forward(p.decoder, z);
}

num::Mat decode_batch(const DdmParams& p, const num::Mat& zs) {
  return mlp_forward(p.decoder, zs);
}

num::Vec reconstruction_error(const DdmParams& p, const num::Vec& y) {
  return y - decode(p, encode(p, y));
}

num::Vec predict_feature(const DdmParams& p, const HistoryState& state,
                         const num::Vec& u_t) {
  return mlp_forward(p.predictor, predictor_input(p, state, u_t));
}

num::Vec predict_observation(const DdmParams& p, const HistoryState& state,
                             const num::Vec& u_t) {
  return decode(p, predict_feature(p, state, u_t));
}

std::vector<num::Vec> rollout_features(const DdmParams& p, HistoryState state,
                                       const std::vector<num::Vec>& controls) {
  if (controls.empty()) {
    throw std::invalid_argument("rollout_features: need at least one control");
  }
  std::vector<num::Vec> out;
  out.reserve(controls.size());
  for (const auto& u : controls) {
    num::Vec z_next = predict_feature(p, state, u);
    out.push_back(z_next);
    state.advance(std::move(z_next), u);
  }
  return out;
}

}  // namespace ddmpc::model
