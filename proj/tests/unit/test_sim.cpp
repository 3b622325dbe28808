#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ddmpc/sim/pendulum.hpp"
#include "ddmpc/sim/tile.hpp"

using namespace ddmpc;
using namespace ddmpc::sim;

TEST_SUITE_BEGIN("sim");

namespace {
constexpr double kPi = std::numbers::pi;

PendulumState fine_step(PendulumState s, double u, const PendulumConfig& cfg) {
  PendulumConfig fine = cfg;
  fine.substeps = cfg.substeps * 1000;
  return pendulum_step(s, u, fine);
}
}  // namespace

TEST_CASE("pendulum: stable equilibrium is a fixed point") {
  const PendulumConfig cfg;
  const auto next = pendulum_step({0.0, 0.0}, 0.0, cfg);
  CHECK(next.angle == 0.0);
  CHECK(next.velocity == 0.0);
}

TEST_CASE("pendulum: unstable equilibrium is a fixed point") {
  const PendulumConfig cfg;
  const auto next = pendulum_step({kPi, 0.0}, 0.0, cfg);
  CHECK(next.angle == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(std::abs(next.velocity) < 1e-12);
}

TEST_CASE("pendulum: one step matches a fine-grained integration") {
  const PendulumConfig cfg;
  const auto coarse = pendulum_step({0.3, 0.0}, 0.0, cfg);
  const auto fine = fine_step({0.3, 0.0}, 0.0, cfg);
  CHECK(std::abs(coarse.angle - fine.angle) < 1e-5);
  CHECK(std::abs(coarse.velocity - fine.velocity) < 1e-5);
}

TEST_CASE("pendulum: torque is clamped to the limit") {
  const PendulumConfig cfg;
  const auto a = pendulum_step({0.0, 0.0}, cfg.torque_limit, cfg);
  const auto b = pendulum_step({0.0, 0.0}, 10.0 * cfg.torque_limit, cfg);
  CHECK(a.angle == b.angle);
  CHECK(a.velocity == b.velocity);
}

TEST_CASE("pendulum: unforced energy never increases") {
  const PendulumConfig cfg;
  num::Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    PendulumState s{rng.uniform(-kPi, kPi), rng.uniform(-6.0, 6.0)};
    double e = pendulum_energy(s, cfg);
    for (int t = 0; t < 5; ++t) {
      s = pendulum_step(s, 0.0, cfg);
      const double e_next = pendulum_energy(s, cfg);
      CHECK(e_next <= e + 1e-9);
      e = e_next;
    }
  }
}

TEST_CASE("pendulum: wrapping stays in (-pi, pi]") {
  CHECK(wrap_angle(kPi) == kPi);
  CHECK(wrap_angle(-kPi) == kPi);
  CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(0.1 - 6.0 * kPi) == doctest::Approx(0.1));
  num::Rng rng(3);
  PendulumConfig cfg;
  PendulumState s{0.0, 0.0};
  for (int t = 0; t < 200; ++t) {
    s = pendulum_step(s, rng.uniform(-5.0, 5.0), cfg);
    CHECK(s.angle > -kPi);
    CHECK(s.angle <= kPi);
  }
}

TEST_CASE("render_pendulum: pixels in [0,1], background exactly 1") {
  const PendulumConfig cfg;
  const auto f = render_pendulum({0.7, 0.0}, cfg);
  f.validate();
  CHECK(f.at(0, 0) == 1.0);
  CHECK(f.at(50, 50) == 1.0);
  int dark = 0;
  for (int i = 0; i < f.pixels.size(); ++i) {
    if (f.pixels[i] < 1.0) ++dark;
  }
  CHECK(dark > 20);  // the rod inks a fair number of pixels
}

TEST_CASE("render_pendulum: mirror symmetry is bit-exact") {
  const PendulumConfig cfg;
  for (const double phi : {0.3, 1.2, 2.9, 0.0001, kPi - 1e-6}) {
    const auto a = render_pendulum({phi, 0.0}, cfg);
    const auto b = render_pendulum({-phi, 0.0}, cfg);
    for (int r = 0; r < kImageSize; ++r) {
      for (int c = 0; c < kImageSize; ++c) {
        REQUIRE(a.at(r, c) == b.at(r, kImageSize - 1 - c));
      }
    }
  }
}

TEST_CASE("render_pendulum: hanging rod confined to the center column band") {
  const PendulumConfig cfg;
  const auto f = render_pendulum({0.0, 0.0}, cfg);
  for (int r = 0; r < kImageSize; ++r) {
    for (int c = 0; c < kImageSize; ++c) {
      if (f.at(r, c) < 1.0) {
        CHECK(c >= 24);
        CHECK(c <= 26);
        CHECK(r >= 25);
      }
    }
  }
  // the rod is genuinely dark in its core
  CHECK(f.at(35, 25) == 0.0);
}

TEST_CASE("render_pendulum: pixel sum varies continuously with the angle") {
  const PendulumConfig cfg;
  num::Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    const double phi = rng.uniform(-kPi, kPi);
    const double s0 = render_pendulum({phi, 0.0}, cfg).pixels.sum();
    const double s1 = render_pendulum({phi + 1e-3, 0.0}, cfg).pixels.sum();
    CHECK(std::abs(s1 - s0) < 0.5);
  }
}

TEST_CASE("tile: zero increment leaves the state and frame unchanged") {
  const TileState s{20.25, 31.5};
  const TileState next = tile_step(s, 0.0, 0.0);
  CHECK(next.x == s.x);
  CHECK(next.y == s.y);
  CHECK(render_tile(s).pixels == render_tile(next).pixels);
}

TEST_CASE("tile: increments past the border clamp to the border") {
  const TileState s{40.0, 10.0};
  const TileState next = tile_step(s, 100.0, -100.0);
  CHECK(next.x == kTileMaxCenter);
  CHECK(next.y == kTileMinCenter);
}

TEST_CASE("tile: integer offsets render as exact translates") {
  const TileState a{12.25, 18.75};
  const TileState b = tile_step(a, 7.0, -3.0);
  REQUIRE(b.x == 19.25);
  REQUIRE(b.y == 15.75);
  const auto fa = render_tile(a);
  const auto fb = render_tile(b);
  for (int r = 0; r < kImageSize; ++r) {
    for (int c = 0; c < kImageSize; ++c) {
      const int r2 = r - 3;
      const int c2 = c + 7;
      if (r2 < 0 || r2 >= kImageSize || c2 < 0 || c2 >= kImageSize) continue;
      REQUIRE(fa.at(r, c) == fb.at(r2, c2));
    }
  }
}

TEST_CASE("tile: frames are valid and mass matches the tile area") {
  const auto f = render_tile({25.5, 25.5});
  f.validate();
  const double darkness = (1.0 - f.pixels.array()).sum();
  CHECK(darkness == doctest::Approx(kTileSidePx * kTileSidePx).epsilon(1e-9));
}

TEST_CASE("tile: center estimate is exact on clean renders") {
  num::Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const TileState s{rng.uniform(kTileMinCenter, kTileMaxCenter),
                      rng.uniform(kTileMinCenter, kTileMaxCenter)};
    const auto est = estimate_tile_center(render_tile(s).pixels);
    CHECK(std::abs(est.x - s.x) < 0.05);
    CHECK(std::abs(est.y - s.y) < 0.05);
  }
}

TEST_CASE("generate_tile_dataset: shapes and determinism") {
  num::Rng a(99), b(99);
  const auto d1 = generate_tile_dataset(a, 2);
  CHECK(d1.frames() == 2);
  CHECK(d1.controls.cols() == 1);
  const auto d2 = generate_tile_dataset(b, 2);
  CHECK(d1.observations == d2.observations);
  CHECK(d1.controls == d2.controls);
}

TEST_CASE("generate_tile_dataset: increments pass a chi-squared uniformity test") {
  num::Rng rng(2024);
  const auto d = generate_tile_dataset(rng, 5001);
  constexpr int bins = 12;
  std::array<int, bins> counts{};
  int total = 0;
  for (num::Index c = 0; c < d.controls.cols(); ++c) {
    for (int axis = 0; axis < 2; ++axis) {
      const double v = d.controls(axis, c);
      REQUIRE(v >= -3.0);
      REQUIRE(v < 3.0);
      const int bin = std::min(bins - 1, static_cast<int>((v + 3.0) / 6.0 * bins));
      ++counts[static_cast<std::size_t>(bin)];
      ++total;
    }
  }
  const double expected = static_cast<double>(total) / bins;
  double chi2 = 0.0;
  for (const int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // chi-squared with 11 dof, 1% critical value
  CHECK(chi2 < 24.725);
}

TEST_SUITE_END();
