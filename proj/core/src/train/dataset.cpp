#include "ddmpc/train/dataset.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "dataset serialization assumes a little-endian host");

namespace ddmpc::train {

namespace {

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_doubles(std::ostream& out, const double* p, std::streamsize n) {
  out.write(reinterpret_cast<const char*>(p), n * static_cast<std::streamsize>(sizeof(double)));
}

void read_doubles(std::istream& in, double* p, std::streamsize n) {
  in.read(reinterpret_cast<char*>(p), n * static_cast<std::streamsize>(sizeof(double)));
}

}  // namespace

void Trajectory::validate() const {
  if (observations.cols() < 1) throw std::invalid_argument("Trajectory: no frames");
  if (controls.cols() != observations.cols() - 1) {
    throw std::invalid_argument("Trajectory: need |controls| = |observations| - 1");
  }
  if (!observations.allFinite() || !controls.allFinite()) {
    throw std::invalid_argument("Trajectory: non-finite values");
  }
}

num::Index Dataset::obs_dim() const {
  if (!trajectories.empty()) return trajectories.front().obs_dim();
  if (!reference_frames.empty()) return reference_frames.front().size();
  return 0;
}

num::Index Dataset::control_dim() const {
  return trajectories.empty() ? 0 : trajectories.front().control_dim();
}

num::Index Dataset::total_frames() const {
  num::Index n = static_cast<num::Index>(reference_frames.size());
  for (const auto& t : trajectories) n += t.frames();
  return n;
}

void Dataset::validate() const {
  const num::Index dim = obs_dim();
  for (const auto& t : trajectories) {
    t.validate();
    if (t.obs_dim() != dim) throw std::invalid_argument("Dataset: mixed observation dims");
    if (t.control_dim() != control_dim()) {
      throw std::invalid_argument("Dataset: mixed control dims");
    }
  }
  for (const auto& r : reference_frames) {
    if (r.size() != dim) throw std::invalid_argument("Dataset: reference frame dim mismatch");
    num::require_finite(r, "Dataset reference frame");
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_dataset: cannot open " + path.string());
  out.write("DDS1", 4);
  write_u32(out, static_cast<std::uint32_t>(data.trajectories.size()));
  for (const auto& t : data.trajectories) {
    write_u32(out, static_cast<std::uint32_t>(t.frames()));
    write_u32(out, static_cast<std::uint32_t>(t.obs_dim()));
    write_u32(out, static_cast<std::uint32_t>(t.control_dim()));
  }
  for (const auto& t : data.trajectories) {
    write_doubles(out, t.observations.data(), t.observations.size());
    write_doubles(out, t.controls.data(), t.controls.size());
  }
  if (!out) throw std::runtime_error("save_dataset: write failed for " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_dataset: cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (std::string_view(magic, 4) != "DDS1") {
    throw std::runtime_error("load_dataset: bad magic in " + path.string());
  }
  const std::uint32_t count = read_u32(in);
  Dataset data;
  data.trajectories.resize(count);
  for (auto& t : data.trajectories) {
    const std::uint32_t frames = read_u32(in);
    const std::uint32_t obs_dim = read_u32(in);
    const std::uint32_t control_dim = read_u32(in);
    if (frames < 1) throw std::runtime_error("load_dataset: empty trajectory");
    t.observations.resize(obs_dim, frames);
    t.controls.resize(control_dim, frames - 1);
  }
  for (auto& t : data.trajectories) {
    read_doubles(in, t.observations.data(), t.observations.size());
    read_doubles(in, t.controls.data(), t.controls.size());
  }
  if (!in) throw std::runtime_error("load_dataset: truncated file " + path.string());
  data.validate();
  return data;
}

}  // namespace ddmpc::train
