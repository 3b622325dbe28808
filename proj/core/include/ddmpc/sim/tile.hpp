#pragma once

#include "ddmpc/num/rng.hpp"
#include "ddmpc/sim/image.hpp"
#include "ddmpc/train/dataset.hpp"

namespace ddmpc::sim {

/// Dark axis-aligned square on a light background, moved by commanded
/// position increments and clamped so it stays fully inside the image.
struct TileState {
  double x = 25.5;  // tile center, image extent [0, 51]
  double y = 25.5;
};

inline constexpr double kTileSidePx = 15.0;
inline constexpr double kTileMinCenter = kTileSidePx / 2.0;          // 7.5
inline constexpr double kTileMaxCenter = 51.0 - kTileSidePx / 2.0;   // 43.5
inline constexpr double kTileMaxStep = 3.0;  // per-axis increment bound

TileState tile_step(const TileState& state, double dx, double dy);

/// 51x51 render with exact box-filter anti-aliasing. States differing by an
/// integer offset render to exact pixel translates.
ImageFrame render_tile(const TileState& state);

/// Random-walk dataset: `frames` screenshots starting from the image center,
/// per-axis increments uniform in [-3, 3]. Controls record the commanded
/// increments (before clamping).
train::Trajectory generate_tile_dataset(num::Rng& rng, int frames);

/// Tile center estimate for a (possibly blurry) 51x51 frame: the peak of the
/// tile-sized box correlation over the darkness map, refined by the darkness
/// centroid around the peak. Exact on cleanly rendered tiles.
struct TileCenter {
  double x = 0.0;
  double y = 0.0;
};
TileCenter estimate_tile_center(const num::Vec& pixels);

}  // namespace ddmpc::sim
