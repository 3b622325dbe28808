#include "ddmpc/sim/tile.hpp"

#include <cmath>
#include <stdexcept>

namespace ddmpc::sim {

TileState tile_step(const TileState& state, double dx, double dy) {
  if (!std::isfinite(dx) || !std::isfinite(dy)) {
    throw std::invalid_argument("tile_step: non-finite increment");
  }
  TileState next;
  next.x = std::clamp(state.x + dx, kTileMinCenter, kTileMaxCenter);
  next.y = std::clamp(state.y + dy, kTileMinCenter, kTileMaxCenter);
  return next;
}

namespace {

// Coverage of pixel extents [j, j+1] by [frac - half, frac + half], where the
// position was split as p = floor(p) + frac. Working relative to floor(p)
// keeps integer translates of the tile bit-exact.
double axis_coverage(int j, double frac) {
  constexpr double half = kTileSidePx / 2.0;
  const double lo = std::max(static_cast<double>(j), frac - half);
  const double hi = std::min(static_cast<double>(j + 1), frac + half);
  return std::clamp(hi - lo, 0.0, 1.0);
}

}  // namespace

ImageFrame render_tile(const TileState& state) {
  const double ix = std::floor(state.x);
  const double iy = std::floor(state.y);
  const double fx = state.x - ix;  // exact
  const double fy = state.y - iy;

  ImageFrame f = ImageFrame::blank(kImageSize, kImageSize);
  for (int row = 0; row < kImageSize; ++row) {
    const double cy = axis_coverage(row - static_cast<int>(iy), fy);
    if (cy == 0.0) continue;
    for (int col = 0; col < kImageSize; ++col) {
      const double cx = axis_coverage(col - static_cast<int>(ix), fx);
      if (cx > 0.0) f.at(row, col) = 1.0 - cx * cy;
    }
  }
  return f;
}

TileCenter estimate_tile_center(const num::Vec& pixels) {
  constexpr int size = kImageSize;
  constexpr int side = static_cast<int>(kTileSidePx);
  if (pixels.size() != static_cast<num::Index>(size) * size) {
    throw std::invalid_argument("estimate_tile_center: expected a 51x51 frame");
  }

  // integral image of the darkness map
  auto dark = [&](int r, int c) {
    return std::max(0.0, 1.0 - pixels[r * size + c]);
  };
  num::Mat integral = num::Mat::Zero(size + 1, size + 1);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      integral(r + 1, c + 1) =
          dark(r, c) + integral(r, c + 1) + integral(r + 1, c) - integral(r, c);
    }
  }
  auto box_sum = [&](int r0, int c0, int h, int w) {
    return integral(r0 + h, c0 + w) - integral(r0, c0 + w) - integral(r0 + h, c0) +
           integral(r0, c0);
  };

  int best_r = 0, best_c = 0;
  double best = -1.0;
  for (int r = 0; r + side <= size; ++r) {
    for (int c = 0; c + side <= size; ++c) {
      const double s = box_sum(r, c, side, side);
      if (s > best) {
        best = s;
        best_r = r;
        best_c = c;
      }
    }
  }

  // darkness centroid over the peak window plus a small margin
  constexpr int margin = 2;
  const int r0 = std::max(0, best_r - margin);
  const int r1 = std::min(size, best_r + side + margin);
  const int c0 = std::max(0, best_c - margin);
  const int c1 = std::min(size, best_c + side + margin);
  double mass = 0.0, mx = 0.0, my = 0.0;
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) {
      const double d = dark(r, c);
      mass += d;
      mx += d * (c + 0.5);
      my += d * (r + 0.5);
    }
  }
  if (mass <= 0.0) {
    return {best_c + kTileSidePx / 2.0, best_r + kTileSidePx / 2.0};
  }
  return {mx / mass, my / mass};
}

train::Trajectory generate_tile_dataset(num::Rng& rng, int frames) {
  if (frames < 2) throw std::invalid_argument("generate_tile_dataset: need frames >= 2");
  TileState state;
  train::Trajectory traj;
  traj.observations.resize(static_cast<num::Index>(kImageSize) * kImageSize, frames);
  traj.controls.resize(2, frames - 1);
  traj.observations.col(0) = render_tile(state).pixels;
  for (int t = 0; t + 1 < frames; ++t) {
    const double dx = rng.uniform(-kTileMaxStep, kTileMaxStep);
    const double dy = rng.uniform(-kTileMaxStep, kTileMaxStep);
    traj.controls(0, t) = dx;
    traj.controls(1, t) = dy;
    state = tile_step(state, dx, dy);
    traj.observations.col(t + 1) = render_tile(state).pixels;
  }
  return traj;
}

}  // namespace ddmpc::sim
