#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spherevar/partition.hpp"
#include "spherevar/pointset.hpp"

namespace spherevar {

// Result of one (process, cap size) variance measurement.
struct VarianceReport {
  ProcessSpec process;
  double phi = 0.0;
  std::optional<double> t;  // threshold parameter when phi = t * N^{-1/d}
  int replicates = 0;
  int centers = 0;
  std::uint64_t seed = 0;
  double v_hat = 0.0;
  double std_err = 0.0;
  double mean_count = 0.0;  // empirical mean, guards the known-mean estimator
  std::optional<double> v_semi;
  std::optional<double> v_semi_se;  // only the jittered estimator is stochastic
  std::optional<double> v_ref;      // asymptotic reference value
};

// Monte Carlo number variance with the known-mean estimator
//   v_hat = mean over replicates and centers of (count - N sigma(C(phi)))^2,
// exact because every process in scope has first intensity N sigma.
// Rotation-invariant processes use a fixed north-pole center when R = 1 and
// uniform random centers otherwise; jittered always uses random centers.
// std_err is the sample standard deviation of the squared deviations over
// all M*R values divided by sqrt(M*R).  Replicates run in parallel
// (SPHEREVAR_THREADS limits the pool); aggregation order is fixed, so the
// result is independent of scheduling.
VarianceReport mc_number_variance(const ProcessSpec& spec, double phi, int replicates,
                                  int centers, std::uint64_t seed);

// Exact i.i.d. number variance N sigma (1 - sigma).
double variance_iid_exact(int n, double phi, int d);

// Spherical-ensemble number variance through the closed integral
//   V = N sin^2(phi)/pi * int_0^1 sqrt(1-v^2) (1 - v^2 sin^2 phi)^{N-1} dv
// (adaptive quadrature, abs tol 1e-10 * n).
double variance_spherical_semianalytic(int n, double phi);

// Lemma-style leading term sqrt(sigma(1-sigma)/pi) * sqrt(N) of the
// spherical ensemble.
double variance_spherical_leading(int n, double phi);

// Harmonic-ensemble number variance
//   V = gamma_d int_0^pi (g_phi(1) - g_phi(cos t)) K_L(cos t)^2 sin(t)^{d-1} dt,
// by composite Gauss-Legendre with the domain split at t = 2 phi (kink of
// g_phi) and panel count scaling with L (integrand oscillates at ~2L).
double variance_harmonic_semianalytic(int d, int L, double phi);

struct JitteredSemiResult {
  double value;
  double std_err;
};

// Jittered number variance reduced to the diagonal terms,
//   V = 1/2 sum_i E_{x,y ~ unif(A_i)} sigma(C(x,phi) triangle C(y,phi)),
// with the per-cell expectation estimated from mc_pairs_per_cell independent
// pairs and sigma(C triangle C') = 2 * cap_diff_volume(2, phi, psi).
JitteredSemiResult variance_jittered_semianalytic(const ZonalPartition& partition,
                                                  double phi, int mc_pairs_per_cell,
                                                  std::uint64_t seed);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of fit residuals
  double r_squared = 0.0;
};

// Ordinary least squares of y against x.
FitResult linear_fit(std::span<const double> x, std::span<const double> y);

// OLS of log(y) against log(x); all inputs must be positive.
FitResult fit_exponent(std::span<const std::pair<double, double>> pairs);

enum class Regime { large, small, threshold };
std::string regime_name(Regime r);
Regime regime_from_name(const std::string& name);

struct RegimeRow {
  double param = 0.0;  // N (large/small) or t (threshold)
  int n_points = 0;
  int L = 0;           // harmonic family only
  double phi = 0.0;
  double v_hat = 0.0;
  double std_err = 0.0;
  std::optional<double> v_semi;
  std::optional<double> v_ref;
};

struct RegimeResult {
  Family family = Family::iid;
  Regime regime = Regime::large;
  std::vector<RegimeRow> rows;
  double fitted_exponent = 0.0;
  double fit_residual = 0.0;
  double r_squared = 0.0;
};

struct RegimeParams {
  std::vector<double> grid;    // N values (or L for harmonic); t values at threshold
  int d = 2;
  double phi = M_PI / 6.0;     // fixed angle of the large-cap regime
  double small_alpha = 0.0;    // small caps: phi_N = c N^{-alpha}; default 1/(2d)
  double small_c = 1.0;
  int threshold_size = 0;      // fixed N (or L for harmonic) at threshold order
  int pairs_per_cell = 2000;   // jittered semi-analytic estimator
};

// Runs v_hat (and v_semi where a semi-analytic route exists) across the grid
// and fits log v against log N or log t.  With replicates == 0 no Monte
// Carlo is run and the fit uses the semi-analytic values.
RegimeResult regime_experiment(Family family, Regime regime, const RegimeParams& params,
                               int replicates, int centers, std::uint64_t seed);

// Worker count for replicate loops: SPHEREVAR_THREADS if set, otherwise the
// hardware concurrency (at least 1).
int worker_count();

}  // namespace spherevar
