#pragma once

#include <filesystem>

#include "ddmpc/model/params.hpp"

namespace ddmpc::model {

/// Binary model file, magic "DDM1": header (n, m, F, per-network layer-size
/// lists and activation tag bytes), then all weights and biases as float64
/// little-endian, weights row-major, in encoder/decoder/predictor order.
/// Round-trips bit-exactly.
void save_ddm(const std::filesystem::path& path, const DdmParams& params);
DdmParams load_ddm(const std::filesystem::path& path);

}  // namespace ddmpc::model
