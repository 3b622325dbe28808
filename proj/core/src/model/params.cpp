#include "ddmpc/model/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ddmpc::model {

namespace {
constexpr double kTwoOverPi = 2.0 / std::numbers::pi;
}

double activate(Activation a, double x) {
  switch (a) {
    case Activation::affine: return x;
    case Activation::arctan: return std::atan(x);
    case Activation::scaled_arctan: return kTwoOverPi * std::atan(x);
  }
  throw std::invalid_argument("activate: unknown activation tag");
}

void activate_inplace(Activation a, num::Mat& x) {
  switch (a) {
    case Activation::affine: return;
    case Activation::arctan:
      x = x.array().atan();
      return;
    case Activation::scaled_arctan:
      x = kTwoOverPi * x.array().atan();
      return;
  }
  throw std::invalid_argument("activate_inplace: unknown activation tag");
}

num::Mat activation_slope(Activation a, const num::Mat& preact) {
  switch (a) {
    case Activation::affine: return num::Mat::Ones(preact.rows(), preact.cols());
    case Activation::arctan: return (1.0 + preact.array().square()).inverse();
    case Activation::scaled_arctan:
      return kTwoOverPi * (1.0 + preact.array().square()).inverse();
  }
  throw std::invalid_argument("activation_slope: unknown activation tag");
}

std::vector<num::Index> MlpParams::layer_sizes() const {
  std::vector<num::Index> sizes;
  sizes.reserve(layers.size() + 1);
  sizes.push_back(input_dim());
  for (const auto& l : layers) sizes.push_back(l.weight.rows());
  return sizes;
}

void MlpParams::validate() const {
  if (layers.empty()) throw std::invalid_argument("MlpParams: needs at least one layer");
  if (activations.size() != layers.size()) {
    throw std::invalid_argument("MlpParams: one activation tag per layer required");
  }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& l = layers[k];
    if (l.bias.size() != l.weight.rows()) {
      throw std::invalid_argument("MlpParams: bias/weight row mismatch");
    }
    if (k > 0 && layers[k - 1].weight.rows() != l.weight.cols()) {
      throw std::invalid_argument("MlpParams: consecutive layer dims do not chain");
    }
    if (!l.weight.allFinite() || !l.bias.allFinite()) {
      throw std::invalid_argument("MlpParams: non-finite parameters");
    }
  }
}

MlpParams make_mlp(const std::vector<num::Index>& sizes, Activation hidden,
                   Activation output) {
  if (sizes.size() < 2) throw std::invalid_argument("make_mlp: need at least 2 sizes");
  MlpParams mlp;
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    mlp.layers.push_back({num::Mat::Zero(sizes[k + 1], sizes[k]), num::Vec::Zero(sizes[k + 1])});
    mlp.activations.push_back(k + 2 == sizes.size() ? output : hidden);
  }
  return mlp;
}

num::Index mlp_param_count(const MlpParams& mlp) {
  num::Index n = 0;
  for (const auto& l : mlp.layers) n += l.weight.size() + l.bias.size();
  return n;
}

MlpParams make_zero_grads(const MlpParams& mlp) {
  MlpParams g;
  g.activations = mlp.activations;
  g.layers.reserve(mlp.layers.size());
  for (const auto& l : mlp.layers) {
    g.layers.push_back(
        {num::Mat::Zero(l.weight.rows(), l.weight.cols()), num::Vec::Zero(l.bias.size())});
  }
  return g;
}

void DdmParams::validate() const {
  encoder.validate();
  decoder.validate();
  predictor.validate();
  if (history_order < 1) throw std::invalid_argument("DdmParams: history_order must be >= 1");
  if (control_dim < 0) throw std::invalid_argument("DdmParams: negative control dim");

  const auto enc_sizes = encoder.layer_sizes();
  auto dec_sizes = decoder.layer_sizes();
  std::reverse(dec_sizes.begin(), dec_sizes.end());
  if (enc_sizes != dec_sizes) {
    throw std::invalid_argument("DdmParams: decoder must mirror encoder layer sizes");
  }
  if (predictor.input_dim() != predictor_input_dim()) {
    throw std::invalid_argument("DdmParams: predictor input width must be n*(m+F)");
  }
  if (predictor.output_dim() != feature_dim()) {
    throw std::invalid_argument("DdmParams: predictor output width must be m");
  }
}

DdmParams make_ddm(const std::vector<num::Index>& encoder_sizes,
                   const std::vector<num::Index>& predictor_sizes, int history_order,
                   num::Index control_dim) {
  DdmParams p;
  p.encoder = make_mlp(encoder_sizes, Activation::arctan, Activation::scaled_arctan);
  std::vector<num::Index> dec_sizes(encoder_sizes.rbegin(), encoder_sizes.rend());
  p.decoder = make_mlp(dec_sizes, Activation::arctan, Activation::affine);
  p.predictor = make_mlp(predictor_sizes, Activation::arctan, Activation::affine);
  p.history_order = history_order;
  p.control_dim = control_dim;
  p.validate();
  return p;
}

num::Index param_count(const DdmParams& p) {
  return mlp_param_count(p.encoder) + mlp_param_count(p.decoder) +
         mlp_param_count(p.predictor);
}

void mlp_flatten_into(const MlpParams& mlp, num::Vec& flat, num::Index& offset) {
  for (const auto& l : mlp.layers) {
    for (num::Index r = 0; r < l.weight.rows(); ++r) {
      flat.segment(offset, l.weight.cols()) = l.weight.row(r).transpose();
      offset += l.weight.cols();
    }
    flat.segment(offset, l.bias.size()) = l.bias;
    offset += l.bias.size();
  }
}

void mlp_unflatten_from(const num::Vec& flat, num::Index& offset, MlpParams& into) {
  for (auto& l : into.layers) {
    for (num::Index r = 0; r < l.weight.rows(); ++r) {
      l.weight.row(r) = flat.segment(offset, l.weight.cols()).transpose();
      offset += l.weight.cols();
    }
    l.bias = flat.segment(offset, l.bias.size());
    offset += l.bias.size();
  }
}

num::Vec flatten(const DdmParams& p) {
  num::Vec flat(param_count(p));
  num::Index offset = 0;
  mlp_flatten_into(p.encoder, flat, offset);
  mlp_flatten_into(p.decoder, flat, offset);
  mlp_flatten_into(p.predictor, flat, offset);
  return flat;
}

void unflatten(const num::Vec& flat, DdmParams& into) {
  if (flat.size() != param_count(into)) {
    throw std::invalid_argument("unflatten: flat vector size mismatch");
  }
  num::Index offset = 0;
  mlp_unflatten_from(flat, offset, into.encoder);
  mlp_unflatten_from(flat, offset, into.decoder);
  mlp_unflatten_from(flat, offset, into.predictor);
}

}  // namespace ddmpc::model
