#pragma once

#include <cstdint>
#include <vector>

#include "ddmpc/num/types.hpp"

namespace ddmpc::model {

enum class Activation : std::uint8_t {
  affine = 0,
  arctan = 1,
  scaled_arctan = 2,  // (2/pi) * arctan, range (-1, 1)
};

double activate(Activation a, double x);
void activate_inplace(Activation a, num::Mat& x);
/// d act / d preact, evaluated elementwise on the preactivations.
num::Mat activation_slope(Activation a, const num::Mat& preact);

struct LayerParams {
  num::Mat weight;  // out x in
  num::Vec bias;    // out
};

struct MlpParams {
  std::vector<LayerParams> layers;
  std::vector<Activation> activations;  // one tag per layer

  num::Index input_dim() const { return layers.front().weight.cols(); }
  num::Index output_dim() const { return layers.back().weight.rows(); }
  std::vector<num::Index> layer_sizes() const;  // [in, ..., out]
  void validate() const;
};

/// Zero-valued network with the given sizes; hidden layers get `hidden`,
/// the last layer gets `output`.
MlpParams make_mlp(const std::vector<num::Index>& sizes, Activation hidden,
                   Activation output);

num::Index mlp_param_count(const MlpParams& mlp);
MlpParams make_zero_grads(const MlpParams& mlp);

struct DdmParams {
  MlpParams encoder;    // observations -> features, output in (-1, 1)
  MlpParams decoder;    // features -> observations, mirrors the encoder
  MlpParams predictor;  // n-step feature/control history -> next feature
  int history_order = 1;       // n
  num::Index control_dim = 0;  // F

  num::Index feature_dim() const { return encoder.output_dim(); }
  num::Index obs_dim() const { return encoder.input_dim(); }
  num::Index predictor_input_dim() const {
    return history_order * (feature_dim() + control_dim);
  }
  void validate() const;
};

/// Zero-initialized model with the canonical activation layout: arctan
/// hidden layers everywhere, scaled arctan on the encoder output, affine
/// decoder and predictor outputs.
DdmParams make_ddm(const std::vector<num::Index>& encoder_sizes,
                   const std::vector<num::Index>& predictor_sizes, int history_order,
                   num::Index control_dim);

// Flat parameter views. Order: per layer, weight in row-major order, then
// bias; layers in network order; networks in encoder, decoder, predictor
// order for the full model.
num::Index param_count(const DdmParams& p);
num::Vec flatten(const DdmParams& p);
void unflatten(const num::Vec& flat, DdmParams& into);
void mlp_flatten_into(const MlpParams& mlp, num::Vec& flat, num::Index& offset);
void mlp_unflatten_from(const num::Vec& flat, num::Index& offset, MlpParams& into);

}  // namespace ddmpc::model
