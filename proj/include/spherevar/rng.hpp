#pragma once

#include <complex>
#include <cstdint>

namespace spherevar {

// Counter-based random stream in the SplitMix64 family.  The state is a pure
// function of (seed, replicate, stream, draw counter), so replicates and
// parallel streams are order-independent and reproducible bit for bit.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t replicate = 0,
                        std::uint64_t stream = 0);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller (second value cached).
  double normal();

  // Standard complex normal, E|z|^2 = 1 (real and imaginary parts each
  // N(0, 1/2)).
  std::complex<double> complex_normal();

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace spherevar
