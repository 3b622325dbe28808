#include "ddmpc/num/rng.hpp"

#include <stdexcept>

namespace ddmpc::num {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kStep = 0xD1B54A32D192ED03ull;

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix(mix(seed + kGolden) ^ mix(stream * kGolden + kStep))) {}

Rng Rng::split(std::uint64_t stream_id) const noexcept {
  return Rng(FromKey{}, mix(key_ ^ mix(stream_id * kStep + kGolden)));
}

std::uint64_t Rng::next_u64() noexcept {
  ++counter_;
  return mix(key_ + counter_ * kGolden);
}

double Rng::uniform01() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("Rng::uniform: lo > hi");
  if (lo == hi) return lo;
  return lo + (hi - lo) * uniform01();
}

Vec Rng::uniform_vec(Index n, double lo, double hi) {
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

}  // namespace ddmpc::num
