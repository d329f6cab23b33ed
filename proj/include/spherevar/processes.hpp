#pragma once

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "spherevar/partition.hpp"
#include "spherevar/pointset.hpp"
#include "spherevar/rng.hpp"

namespace spherevar {

// Raised when an algorithm fails numerically (as opposed to bad input).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Projection kernel K onto an N-dimensional subspace of L^2(S^d): Hermitian,
// with constant diagonal K(x,x) = N = rank.
class ProjectionKernel {
 public:
  virtual ~ProjectionKernel() = default;
  virtual std::complex<double> eval(std::span<const double> x,
                                    std::span<const double> y) const = 0;
  virtual int rank() const = 0;
  virtual int ambient_dim() const = 0;
};

// Kernel of the harmonic ensemble: K(x,y) = K_L(<x,y>) on S^d,
// rank Z(d+1, L).
class HarmonicKernel final : public ProjectionKernel {
 public:
  HarmonicKernel(int d, int L);
  std::complex<double> eval(std::span<const double> x,
                            std::span<const double> y) const override;
  int rank() const override { return rank_; }
  int ambient_dim() const override { return d_ + 1; }

 private:
  int d_, L_, rank_;
};

// Block kernel of jittered sampling: K(x,y) = N when x and y share a cell of
// the partition, 0 otherwise.
class JitteredKernel final : public ProjectionKernel {
 public:
  explicit JitteredKernel(const ZonalPartition& partition) : partition_(&partition) {}
  std::complex<double> eval(std::span<const double> x,
                            std::span<const double> y) const override;
  int rank() const override { return partition_->size(); }
  int ambient_dim() const override { return 3; }

 private:
  const ZonalPartition* partition_;
};

// One uniform point on S^d (isotropic Gaussian, normalised).
void uniform_on_sphere(int d, RandomStream& rng, std::span<double> out);

// n independent uniform points on S^d.
PointSet sample_iid(int d, int n, RandomStream& rng);

// Spherical ensemble on S^2: the n eigenvalues of A^{-1}B for n x n matrices
// with i.i.d. standard complex Gaussian entries, mapped to the sphere by the
// inverse stereographic projection
//   z = u+iv  ->  (2u, 2v, |z|^2 - 1) / (1 + |z|^2).
PointSet sample_spherical_ensemble(int n, RandomStream& rng);

// Per-step proposal statistics of the chain-rule sampler, aggregated over
// runs when reused.
struct ChainRuleStats {
  std::vector<long long> proposals;   // proposals made at step i (1-based -> index i-1)
  std::vector<long long> acceptances; // always 1 per step per run
};

// Sequential sampler for projection DPPs.  Draws x_1 uniformly; for step i
// draws from the conditional density
//   p_i(x) = (K(x,x) - k_i(x)^* G_{i-1}^{-1} k_i(x)) / (N-i+1)
// by rejection from the uniform proposal with envelope N/(N-i+1), keeping a
// growing Cholesky factor of the Gram matrix G.  Returns exactly N points.
PointSet chain_rule_projection_dpp(const ProjectionKernel& kernel, RandomStream& rng,
                                   ChainRuleStats* stats = nullptr);

// Harmonic ensemble on S^d for degree L: chain-rule DPP with the kernel
// K_L(<x,y>); samples Z(d+1, L) points.
PointSet sample_harmonic_ensemble(int d, int L, RandomStream& rng);

// Jittered sampling: one uniform point per cell; point i lies in cell i.
PointSet sample_jittered(const ZonalPartition& partition, RandomStream& rng);

// Prebuilds per-family state (the partition for jittered) and then draws
// replicates deterministically from (seed, replicate).  draw() is const and
// safe to call concurrently.
class ProcessSampler {
 public:
  explicit ProcessSampler(const ProcessSpec& spec);
  const ProcessSpec& spec() const { return spec_; }
  int point_count() const { return spec_.point_count(); }
  const ZonalPartition* partition() const { return partition_.get(); }
  PointSet draw(std::uint64_t seed, int replicate) const;

 private:
  ProcessSpec spec_;
  std::shared_ptr<const ZonalPartition> partition_;  // jittered only
};

// Convenience wrapper carrying the sample's provenance.
PointSample sample_process(const ProcessSpec& spec, std::uint64_t seed, int replicate);

}  // namespace spherevar
