#pragma once

#include <filesystem>
#include <string>

#include "ddmpc/num/types.hpp"

namespace ddmpc::sim {

/// Render size of both simulated environments.
inline constexpr int kImageSize = 51;

/// Grayscale observation. Pixels are stored row-major in [0, 1];
/// 0 is ink, 1 is background.
struct ImageFrame {
  int width = 0;
  int height = 0;
  num::Vec pixels;

  double& at(int row, int col) { return pixels[row * width + col]; }
  double at(int row, int col) const { return pixels[row * width + col]; }

  static ImageFrame blank(int width, int height, double value = 1.0);
  void validate() const;  // throws on size mismatch or pixels outside [0,1]
};

/// Binary PGM ("P5", maxval 255); pixel byte = round(255 * value).
void write_pgm(const std::filesystem::path& path, const ImageFrame& frame);
ImageFrame read_pgm(const std::filesystem::path& path);

/// Side-by-side strip of equally sized frames, 1px separator.
ImageFrame hstack_frames(const std::vector<ImageFrame>& frames);

}  // namespace ddmpc::sim
