#include "ddmpc/model/serialize.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

namespace ddmpc::model {

namespace {

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_mlp_header(std::ostream& out, const MlpParams& mlp) {
  const auto sizes = mlp.layer_sizes();
  write_u32(out, static_cast<std::uint32_t>(mlp.layers.size()));
  for (const auto s : sizes) write_u32(out, static_cast<std::uint32_t>(s));
  for (const auto a : mlp.activations) {
    const auto byte = static_cast<std::uint8_t>(a);
    out.write(reinterpret_cast<const char*>(&byte), 1);
  }
}

MlpParams read_mlp_header(std::istream& in) {
  const std::uint32_t layer_count = read_u32(in);
  if (layer_count == 0 || layer_count > 64) {
    throw std::runtime_error("load_ddm: implausible layer count");
  }
  std::vector<num::Index> sizes(layer_count + 1);
  for (auto& s : sizes) s = static_cast<num::Index>(read_u32(in));
  MlpParams mlp = make_mlp(sizes, Activation::affine, Activation::affine);
  for (auto& a : mlp.activations) {
    std::uint8_t byte = 0;
    in.read(reinterpret_cast<char*>(&byte), 1);
    if (byte > 2) throw std::runtime_error("load_ddm: unknown activation tag");
    a = static_cast<Activation>(byte);
  }
  return mlp;
}

void write_mlp_payload(std::ostream& out, const MlpParams& mlp) {
  for (const auto& l : mlp.layers) {
    for (num::Index r = 0; r < l.weight.rows(); ++r) {
      for (num::Index c = 0; c < l.weight.cols(); ++c) {
        const double v = l.weight(r, c);
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
      }
    }
    out.write(reinterpret_cast<const char*>(l.bias.data()),
              static_cast<std::streamsize>(l.bias.size() * sizeof(double)));
  }
}

void read_mlp_payload(std::istream& in, MlpParams& mlp) {
  for (auto& l : mlp.layers) {
    for (num::Index r = 0; r < l.weight.rows(); ++r) {
      for (num::Index c = 0; c < l.weight.cols(); ++c) {
        double v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        l.weight(r, c) = v;
      }
    }
    in.read(reinterpret_cast<char*>(l.bias.data()),
            static_cast<std::streamsize>(l.bias.size() * sizeof(double)));
  }
}

}  // namespace

void save_ddm(const std::filesystem::path& path, const DdmParams& params) {
  params.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_ddm: cannot open " + path.string());
  out.write("DDM1", 4);
  write_u32(out, static_cast<std::uint32_t>(params.history_order));
  write_u32(out, static_cast<std::uint32_t>(params.feature_dim()));
  write_u32(out, static_cast<std::uint32_t>(params.control_dim));
  write_mlp_header(out, params.encoder);
  write_mlp_header(out, params.decoder);
  write_mlp_header(out, params.predictor);
  write_mlp_payload(out, params.encoder);
  write_mlp_payload(out, params.decoder);
  write_mlp_payload(out, params.predictor);
  if (!out) throw std::runtime_error("save_ddm: write failed for " + path.string());
}

DdmParams load_ddm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_ddm: cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (std::string_view(magic, 4) != "DDM1") {
    throw std::runtime_error("load_ddm: bad magic in " + path.string());
  }
  DdmParams p;
  p.history_order = static_cast<int>(read_u32(in));
  const auto feature_dim = static_cast<num::Index>(read_u32(in));
  p.control_dim = static_cast<num::Index>(read_u32(in));
  p.encoder = read_mlp_header(in);
  p.decoder = read_mlp_header(in);
  p.predictor = read_mlp_header(in);
  read_mlp_payload(in, p.encoder);
  read_mlp_payload(in, p.decoder);
  read_mlp_payload(in, p.predictor);
  if (!in) throw std::runtime_error("load_ddm: truncated file " + path.string());
  if (p.encoder.output_dim() != feature_dim) {
    throw std::runtime_error("load_ddm: header feature dim inconsistent with encoder");
  }
  p.validate();
  return p;
}

}  // namespace ddmpc::model
