#include "ddmpc/train/init.hpp"

#include <stdexcept>
#include <string>

#include "ddmpc/model/forward.hpp"
#include "ddmpc/train/pca.hpp"

namespace ddmpc::train {

using model::Activation;
using model::DdmParams;
using model::MlpParams;

void init_predictor_uniform(MlpParams& predictor, num::Rng& rng) {
  for (auto& layer : predictor.layers) {
    const double scale = 1.0 / static_cast<double>(layer.weight.cols());
    for (num::Index r = 0; r < layer.weight.rows(); ++r) {
      for (num::Index c = 0; c < layer.weight.cols(); ++c) {
        layer.weight(r, c) = rng.uniform(-0.1, 0.1) * scale;
      }
    }
    layer.bias.setZero();
  }
}

DdmParams pca_init(const std::vector<num::Index>& encoder_sizes,
                   const std::vector<num::Index>& predictor_sizes, int history_order,
                   num::Index control_dim, const num::Mat& data, num::Rng& rng,
                   Activation hidden_act, Activation code_act) {
  for (std::size_t i = 0; i + 1 < encoder_sizes.size(); ++i) {
    if (encoder_sizes[i + 1] >= encoder_sizes[i]) {
      throw std::invalid_argument(
          "pca_init: encoder layer sizes must decrease strictly toward the code layer");
    }
  }
  if (data.rows() != encoder_sizes.front()) {
    throw std::invalid_argument("pca_init: data dimension does not match the input layer");
  }

  DdmParams params;
  params.encoder = model::make_mlp(encoder_sizes, hidden_act, code_act);
  const std::vector<num::Index> decoder_sizes(encoder_sizes.rbegin(), encoder_sizes.rend());
  params.decoder = model::make_mlp(decoder_sizes, hidden_act, Activation::affine);
  params.predictor =
      model::make_mlp(predictor_sizes, hidden_act, Activation::affine);
  params.history_order = history_order;
  params.control_dim = control_dim;
  const std::size_t pair_count = params.encoder.layers.size();

  // Representation of the data at the current depth: preactivations and the
  // activated values actually seen by the next layer. gain maps activated
  // values back to preactivations in the least-squares sense.
  num::Mat preact = data;
  num::Mat hidden = data;
  double gain = 1.0;

  for (std::size_t i = 0; i < pair_count; ++i) {
    const Activation act = params.encoder.activations[i];
    PcaProjection pca;
    try {
      pca = pca_fit(preact, encoder_sizes[i + 1]);
    } catch (const std::exception& e) {
      throw std::runtime_error("pca_init: insufficient data rank at encoder layer " +
                               std::to_string(i) + ": " + e.what());
    }

    const num::Mat coords = pca_apply(pca, preact);
    const double max_abs = coords.cwiseAbs().maxCoeff();
    if (!(max_abs > 0)) {
      throw std::runtime_error("pca_init: degenerate projection at encoder layer " +
                               std::to_string(i));
    }
    const double scale = (act == Activation::affine) ? 1.0 : 0.5 / max_abs;

    auto& enc = params.encoder.layers[i];
    enc.weight = (scale * gain) * pca.basis.transpose();
    enc.bias = -scale * (pca.basis.transpose() * pca.mean);

    num::Mat next_pre = (enc.weight * hidden).colwise() + enc.bias;
    num::Mat next_hidden = next_pre;
    model::activate_inplace(act, next_hidden);
    const double denom = next_hidden.squaredNorm();
    const double next_gain =
        denom > 0 ? next_pre.cwiseProduct(next_hidden).sum() / denom : 1.0;

    auto& dec = params.decoder.layers[pair_count - 1 - i];
    dec.weight = (next_gain / scale) * pca.basis;
    dec.bias = pca.mean;

    preact = std::move(next_pre);
    hidden = std::move(next_hidden);
    gain = next_gain;
  }

  init_predictor_uniform(params.predictor, rng);
  params.validate();
  return params;
}

}  // namespace ddmpc::train
