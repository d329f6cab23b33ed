#include "spherevar/rng.hpp"

#include <cmath>

namespace spherevar {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t replicate,
                           std::uint64_t stream) {
  std::uint64_t k = mix(seed + kGolden);
  k = mix(k ^ (0xA24BAED4963EE407ull + replicate));
  k = mix(k ^ (0x9FB21C651E98DF25ull + stream));
  state_ = k;
}

std::uint64_t RandomStream::next_u64() {
  state_ += kGolden;
  return mix(state_);
}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  cached_normal_ = r * std::sin(2.0 * M_PI * u2);
  has_cached_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

std::complex<double> RandomStream::complex_normal() {
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-std::log(u1));  // modulus for E|z|^2 = 1
  return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

}  // namespace spherevar
