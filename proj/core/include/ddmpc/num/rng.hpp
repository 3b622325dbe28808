#pragma once

#include <cstdint>

#include "ddmpc/num/types.hpp"

namespace ddmpc::num {

/// Counter-based pseudo-random generator. Draw i from a given (seed, stream)
/// is a pure hash of (seed, stream, i), so independently created instances
/// never share state and replay is exact. Streams split off the same seed are
/// statistically independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  /// Independent, reproducible sub-stream of this generator's seed material.
  Rng split(std::uint64_t stream_id) const noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform draw in [lo, hi). Requires lo <= hi; lo == hi returns lo.
  double uniform(double lo, double hi);

  /// Uniform draw in [0, 1).
  double uniform01() noexcept;

  Vec uniform_vec(Index n, double lo, double hi);

 private:
  struct FromKey {};
  Rng(FromKey, std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace ddmpc::num
