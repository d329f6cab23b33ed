#include "spherevar/processes.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "spherevar/specfun.hpp"

namespace spherevar {

namespace {

constexpr long long kMaxConsecutiveRejections = 1'000'000;

double clamp1(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

Eigen::MatrixXcd random_complex_matrix(int n, RandomStream& rng) {
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
  return m;
}

}  // namespace

HarmonicKernel::HarmonicKernel(int d, int L) : d_(d), L_(L) {
  ProcessSpec spec{Family::harmonic, d, 0, L};
  spec.validate();
  rank_ = spec.point_count();
}

std::complex<double> HarmonicKernel::eval(std::span<const double> x,
                                          std::span<const double> y) const {
  return {kernel_kl(d_, L_, clamp1(dot(x, y))), 0.0};
}

std::complex<double> JitteredKernel::eval(std::span<const double> x,
                                          std::span<const double> y) const {
  const bool same = partition_->locate(x) == partition_->locate(y);
  return {same ? static_cast<double>(partition_->size()) : 0.0, 0.0};
}

void uniform_on_sphere(int d, RandomStream& rng, std::span<double> out) {
  while (true) {
    double norm2 = 0.0;
    for (int i = 0; i <= d; ++i) {
      out[i] = rng.normal();
      norm2 += out[i] * out[i];
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (int i = 0; i <= d; ++i) out[i] *= inv;
      return;
    }
  }
}

PointSet sample_iid(int d, int n, RandomStream& rng) {
  ProcessSpec{Family::iid, d, n, 0}.validate();
  PointSet pts(d + 1, n);
  for (int i = 0; i < n; ++i) uniform_on_sphere(d, rng, pts.mutable_point(i));
  return pts;
}

PointSet sample_spherical_ensemble(int n, RandomStream& rng) {
  ProcessSpec{Family::spherical, 2, n, 0}.validate();

  Eigen::MatrixXcd a = random_complex_matrix(n, rng);
  Eigen::VectorXcd eigenvalues;
  for (int attempt = 0;; ++attempt) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    if (lu.rcond() < 1e-14) {  // probability-zero event under the model
      a = random_complex_matrix(n, rng);
      continue;
    }
    const Eigen::MatrixXcd b = random_complex_matrix(n, rng);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(lu.solve(b), false);
    if (solver.info() == Eigen::Success) {
      eigenvalues = solver.eigenvalues();
      break;
    }
    if (attempt >= 1) throw numerical_error("spherical ensemble: eigensolver failed");
    a = random_complex_matrix(n, rng);
  }

  PointSet pts(3, n);
  for (int i = 0; i < n; ++i) {
    const std::complex<double> z = eigenvalues(i);
    const double r2 = std::norm(z);
    auto p = pts.mutable_point(i);
    if (!std::isfinite(r2) || r2 > 1e300) {  // near the projection pole
      p[0] = 0.0;
      p[1] = 0.0;
      p[2] = 1.0;
    } else {
      const double denom = 1.0 + r2;
      p[0] = 2.0 * z.real() / denom;
      p[1] = 2.0 * z.imag() / denom;
      p[2] = (r2 - 1.0) / denom;
    }
  }
  return pts;
}

PointSet chain_rule_projection_dpp(const ProjectionKernel& kernel, RandomStream& rng,
                                   ChainRuleStats* stats) {
  const int n = kernel.rank();
  const int d = kernel.ambient_dim() - 1;
  if (n < 1) throw std::domain_error("chain rule: kernel rank must be >= 1");
  if (stats) {
    stats->proposals.resize(n, 0);
    stats->acceptances.resize(n, 0);
  }

  PointSet pts(d + 1, n);
  std::vector<std::complex<double>> chol(static_cast<std::size_t>(n) * n);  // lower
  std::vector<std::complex<double>> k(n), w(n);
  std::vector<double> candidate(d + 1);
  const double nd = static_cast<double>(n);

  for (int i = 0; i < n; ++i) {
    long long rejections = 0;
    while (true) {
      if (rejections > kMaxConsecutiveRejections)
        throw numerical_error("chain rule: proposal acceptance stalled (kernel bug?)");
      uniform_on_sphere(d, rng, candidate);
      if (stats) stats->proposals[i] += 1;

      // forward solve L w = k for the i existing points, then the Schur
      // complement K(x,x) - |w|^2 is the unnormalised conditional density
      for (int j = 0; j < i; ++j) k[j] = kernel.eval(pts.point(j), candidate);
      double norm_w2 = 0.0;
      for (int r = 0; r < i; ++r) {
        std::complex<double> s = k[r];
        for (int c = 0; c < r; ++c) s -= chol[static_cast<std::size_t>(r) * n + c] * w[c];
        w[r] = s / chol[static_cast<std::size_t>(r) * n + r];
        norm_w2 += std::norm(w[r]);
      }
      const double resid = kernel.eval(candidate, candidate).real() - norm_w2;
      if (resid < 1e-10 * nd) {  // numerically coincident with a chosen point
        ++rejections;
        continue;
      }
      if (rng.uniform01() < resid / nd) {
        for (int c = 0; c < i; ++c) {
          // new Gram row is w^H
          chol[static_cast<std::size_t>(i) * n + c] = std::conj(w[c]);
        }
        chol[static_cast<std::size_t>(i) * n + i] = std::sqrt(resid);
        auto p = pts.mutable_point(i);
        for (int c = 0; c <= d; ++c) p[c] = candidate[c];
        if (stats) stats->acceptances[i] += 1;
        break;
      }
      ++rejections;
    }
  }
  return pts;
}

PointSet sample_harmonic_ensemble(int d, int L, RandomStream& rng) {
  return chain_rule_projection_dpp(HarmonicKernel(d, L), rng);
}

PointSet sample_jittered(const ZonalPartition& partition, RandomStream& rng) {
  PointSet pts(3, partition.size());
  for (int i = 0; i < partition.size(); ++i)
    partition.sample_in_cell(i, rng, pts.mutable_point(i));
  return pts;
}

ProcessSampler::ProcessSampler(const ProcessSpec& spec) : spec_(spec) {
  spec_.validate();
  if (spec_.family == Family::jittered)
    partition_ = std::make_shared<const ZonalPartition>(spec_.n);
}

PointSet ProcessSampler::draw(std::uint64_t seed, int replicate) const {
  RandomStream rng(seed, static_cast<std::uint64_t>(replicate), 0);
  switch (spec_.family) {
    case Family::iid: return sample_iid(spec_.d, spec_.n, rng);
    case Family::spherical: return sample_spherical_ensemble(spec_.n, rng);
    case Family::harmonic: return sample_harmonic_ensemble(spec_.d, spec_.L, rng);
    case Family::jittered: return sample_jittered(*partition_, rng);
  }
  throw std::domain_error("unreachable process family");
}

PointSample sample_process(const ProcessSpec& spec, std::uint64_t seed, int replicate) {
  ProcessSampler sampler(spec);
  return PointSample{spec, seed, replicate, sampler.draw(seed, replicate)};
}

}  // namespace spherevar
