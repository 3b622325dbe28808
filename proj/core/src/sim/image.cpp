#include "ddmpc/sim/image.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace ddmpc::sim {

ImageFrame ImageFrame::blank(int width, int height, double value) {
  ImageFrame f;
  f.width = width;
  f.height = height;
  f.pixels = num::Vec::Constant(static_cast<num::Index>(width) * height, value);
  return f;
}

void ImageFrame::validate() const {
  if (width <= 0 || height <= 0 ||
      pixels.size() != static_cast<num::Index>(width) * height) {
    throw std::invalid_argument("ImageFrame: size mismatch");
  }
  if ((pixels.array() < 0.0).any() || (pixels.array() > 1.0).any() ||
      !pixels.allFinite()) {
    throw std::invalid_argument("ImageFrame: pixel values outside [0,1]");
  }
}

void write_pgm(const std::filesystem::path& path, const ImageFrame& frame) {
  frame.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path.string());
  out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
  std::vector<std::uint8_t> bytes(frame.pixels.size());
  for (num::Index i = 0; i < frame.pixels.size(); ++i) {
    bytes[i] = static_cast<std::uint8_t>(std::lround(255.0 * frame.pixels[i]));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write_pgm: write failed for " + path.string());
}

ImageFrame read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_pgm: cannot open " + path.string());
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P5" || w <= 0 || h <= 0 || maxval != 255) {
    throw std::runtime_error("read_pgm: unsupported header in " + path.string());
  }
  in.get();  // single whitespace after maxval
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!in) throw std::runtime_error("read_pgm: truncated file " + path.string());
  ImageFrame f;
  f.width = w;
  f.height = h;
  f.pixels.resize(static_cast<num::Index>(w) * h);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    f.pixels[static_cast<num::Index>(i)] = bytes[i] / 255.0;
  }
  return f;
}

ImageFrame hstack_frames(const std::vector<ImageFrame>& frames) {
  if (frames.empty()) throw std::invalid_argument("hstack_frames: empty input");
  const int h = frames.front().height;
  const int w = frames.front().width;
  const int total_w = static_cast<int>(frames.size()) * (w + 1) - 1;
  ImageFrame out = ImageFrame::blank(total_w, h, 0.5);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (frames[k].width != w || frames[k].height != h) {
      throw std::invalid_argument("hstack_frames: mixed frame sizes");
    }
    const int x0 = static_cast<int>(k) * (w + 1);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) out.at(r, x0 + c) = frames[k].at(r, c);
    }
  }
  return out;
}

}  // namespace ddmpc::sim
