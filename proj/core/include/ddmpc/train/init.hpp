#pragma once

#include "ddmpc/model/params.hpp"
#include "ddmpc/num/rng.hpp"

namespace ddmpc::train {

/// Layer-pair PCA initialization of the auto-encoder: outermost in, each
/// encoder/decoder pair gets the PCA solution of the current representation
/// (encoder weight basis^T, decoder weight basis), the data is projected and
/// the next pair recurses. Nonlinear layers get their weights pre-scaled so
/// preactivations land in arctan's near-linear range, with a least-squares
/// gain on the paired decoder layer compensating the activation. With affine
/// activations the construction reproduces PCA exactly. The predictor is
/// initialized uniform in [-0.1, 0.1]/fan-in from `rng`, biases zero.
///
/// `encoder_sizes` must decrease strictly toward the code layer; `data`
/// holds one observation per column. Throws if the data cannot support a
/// layer's PCA fit, naming the layer.
model::DdmParams pca_init(const std::vector<num::Index>& encoder_sizes,
                          const std::vector<num::Index>& predictor_sizes,
                          int history_order, num::Index control_dim, const num::Mat& data,
                          num::Rng& rng,
                          model::Activation hidden = model::Activation::arctan,
                          model::Activation code = model::Activation::scaled_arctan);

/// Predictor-only variant used when warm-starting keeps the auto-encoder.
void init_predictor_uniform(model::MlpParams& predictor, num::Rng& rng);

}  // namespace ddmpc::train
