#include "spherevar/variance.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "spherevar/capgeom.hpp"
#include "spherevar/processes.hpp"
#include "spherevar/quadrature.hpp"
#include "spherevar/specfun.hpp"

namespace spherevar {

namespace {

// run fn(i) for i in [0, count) on the worker pool; fn must only write to
// slots owned by its index
template <typename Fn>
void parallel_for(int count, const Fn& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double mean_of(std::span<const double> v) {
  return compensated_sum(v) / static_cast<double>(v.size());
}

double stderr_of(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  const double var = compensated_sum(sq) / static_cast<double>(v.size() - 1);
  return std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("SPHEREVAR_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

VarianceReport mc_number_variance(const ProcessSpec& spec, double phi, int replicates,
                                  int centers, std::uint64_t seed) {
  spec.validate();
  if (!(phi > 0.0 && phi <= M_PI)) throw std::domain_error("mc_number_variance: phi outside (0, pi]");
  if (replicates < 2) throw std::domain_error("mc_number_variance: require replicates >= 2");
  if (centers < 1) throw std::domain_error("mc_number_variance: require centers >= 1");

  const ProcessSampler sampler(spec);
  const int n_points = sampler.point_count();
  const int dim = spec.d + 1;
  const double sigma = cap_area(spec.d, phi);
  const double mu = n_points * sigma;
  const double cos_phi = std::cos(phi);
  const bool fixed_center = spec.rotation_invariant() && centers == 1;

  std::vector<double> sq_dev(static_cast<std::size_t>(replicates) * centers);
  std::vector<double> counts(static_cast<std::size_t>(replicates) * centers);

  parallel_for(replicates, [&](int m) {
    const PointSet pts = sampler.draw(seed, m);
    RandomStream center_rng(seed, static_cast<std::uint64_t>(m), 1);
    std::vector<double> center(dim, 0.0);
    for (int r = 0; r < centers; ++r) {
      if (fixed_center)
        center[dim - 1] = 1.0;  // north pole
      else
        uniform_on_sphere(spec.d, center_rng, center);
      int count = 0;
      for (int i = 0; i < n_points; ++i)
        if (dot(pts.point(i), center) > cos_phi) ++count;
      const double dev = count - mu;
      sq_dev[static_cast<std::size_t>(m) * centers + r] = dev * dev;
      counts[static_cast<std::size_t>(m) * centers + r] = count;
    }
  });

  VarianceReport report;
  report.process = spec;
  report.phi = phi;
  report.replicates = replicates;
  report.centers = centers;
  report.seed = seed;
  report.v_hat = mean_of(sq_dev);
  report.std_err = stderr_of(sq_dev, report.v_hat);
  report.mean_count = mean_of(counts);
  return report;
}

double variance_iid_exact(int n, double phi, int d) {
  if (n < 1) throw std::domain_error("variance_iid_exact: require n >= 1");
  const double sigma = cap_area(d, phi);
  return n * sigma * (1.0 - sigma);
}

double variance_spherical_semianalytic(int n, double phi) {
  if (n < 1) throw std::domain_error("variance_spherical_semianalytic: require n >= 1");
  if (!(phi > 0.0 && phi < M_PI))
    throw std::domain_error("variance_spherical_semianalytic: phi outside (0, pi)");
  const double s2 = std::sin(phi) * std::sin(phi);
  const auto f = [n, s2](double v) {
    return std::sqrt(1.0 - v * v) * std::exp((n - 1) * std::log1p(-v * v * s2));
  };
  const double scale = n * s2 / M_PI;
  const double integral = integrate_adaptive(f, 0.0, 1.0, 1e-10 * n / scale);
  return scale * integral;
}

double variance_spherical_leading(int n, double phi) {
  const double sigma = cap_area(2, phi);
  return std::sqrt(sigma * (1.0 - sigma) / M_PI) * std::sqrt(static_cast<double>(n));
}

double variance_harmonic_semianalytic(int d, int L, double phi) {
  if (!(phi > 0.0 && phi <= 0.5 * M_PI))
    throw std::domain_error("variance_harmonic_semianalytic: phi outside (0, pi/2]");
  const double sigma = cap_area(d, phi);
  const auto weight = [d, L](double theta) {
    const double k = kernel_kl(d, L, std::cos(theta));
    return k * k * std::pow(std::sin(theta), d - 1);
  };
  const auto inner = [&](double theta) {
    return cap_diff_volume(d, phi, theta) * weight(theta);
  };
  // panels per unit theta scale with the kernel's oscillation frequency
  const double per_pi = std::max(64, 8 * L);
  const double split = 2.0 * phi;
  const int p1 = std::max(1, static_cast<int>(std::ceil(split / M_PI * per_pi)));
  const int p2 = std::max(1, static_cast<int>(std::ceil((M_PI - split) / M_PI * per_pi)));
  const double head = integrate_composite(inner, 0.0, split, p1);
  // beyond theta = 2 phi the caps are disjoint and g_phi(1)-g_phi = sigma
  const double tail = sigma * integrate_composite(weight, split, M_PI, p2);
  return gamma_d(d) * (head + tail);
}

JitteredSemiResult variance_jittered_semianalytic(const ZonalPartition& partition,
                                                  double phi, int mc_pairs_per_cell,
                                                  std::uint64_t seed) {
  if (mc_pairs_per_cell < 1)
    throw std::domain_error("variance_jittered_semianalytic: require pairs >= 1");
  if (!(phi >= 0.0 && phi <= 0.5 * M_PI))
    throw std::domain_error("variance_jittered_semianalytic: phi outside [0, pi/2]");
  if (phi == 0.0) return {0.0, 0.0};

  const int n = partition.size();
  std::vector<double> cell_mean(n), cell_var(n);
  parallel_for(n, [&](int i) {
    RandomStream rng(seed, static_cast<std::uint64_t>(i), 2);
    std::array<double, 3> x, y;
    std::vector<double> vals(mc_pairs_per_cell);
    for (int p = 0; p < mc_pairs_per_cell; ++p) {
      partition.sample_in_cell(i, rng, x);
      partition.sample_in_cell(i, rng, y);
      vals[p] = cap_diff_volume(2, phi, geodesic_angle(x, y));
    }
    const double mean = mean_of(vals);
    cell_mean[i] = mean;
    double acc = 0.0;
    for (double v : vals) acc += (v - mean) * (v - mean);
    cell_var[i] = mc_pairs_per_cell > 1 ? acc / (mc_pairs_per_cell - 1) : 0.0;
  });

  // V = 1/2 sum_i E[2 diff] = sum_i E[diff]; cells are independent
  double se2 = 0.0;
  for (int i = 0; i < n; ++i) se2 += cell_var[i] / mc_pairs_per_cell;
  return {compensated_sum(cell_mean), std::sqrt(se2)};
}

FitResult linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::domain_error("linear_fit: need >= 2 equal-length samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::domain_error("linear_fit: degenerate abscissae");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.residual = std::sqrt(ss_res / n);
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

FitResult fit_exponent(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw std::domain_error("fit_exponent: need >= 3 pairs");
  std::vector<double> lx(pairs.size()), ly(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!(pairs[i].first > 0.0 && pairs[i].second > 0.0))
      throw std::domain_error("fit_exponent: inputs must be positive");
    lx[i] = std::log(pairs[i].first);
    ly[i] = std::log(pairs[i].second);
  }
  return linear_fit(lx, ly);
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::large: return "large";
    case Regime::small: return "small";
    case Regime::threshold: return "threshold";
  }
  return "?";
}

Regime regime_from_name(const std::string& name) {
  if (name == "large") return Regime::large;
  if (name == "small") return Regime::small;
  if (name == "threshold") return Regime::threshold;
  throw std::domain_error("unknown regime: " + name);
}

namespace {

ProcessSpec make_spec(Family family, int d, int size_param) {
  ProcessSpec spec;
  spec.family = family;
  spec.d = family == Family::iid || family == Family::harmonic ? d : 2;
  if (family == Family::harmonic)
    spec.L = size_param;
  else
    spec.n = size_param;
  return spec;
}

std::optional<double> semi_value(const ProcessSpec& spec, double phi, int pairs,
                                 std::uint64_t seed, std::optional<double>* se) {
  switch (spec.family) {
    case Family::iid:
      return variance_iid_exact(spec.n, phi, spec.d);
    case Family::spherical:
      return variance_spherical_semianalytic(spec.n, phi);
    case Family::harmonic:
      if (phi > 0.5 * M_PI) return std::nullopt;
      return variance_harmonic_semianalytic(spec.d, spec.L, phi);
    case Family::jittered: {
      if (phi > 0.5 * M_PI) return std::nullopt;
      const ZonalPartition partition(spec.n);
      const JitteredSemiResult r = variance_jittered_semianalytic(partition, phi, pairs, seed);
      if (se) *se = r.std_err;
      return r.value;
    }
  }
  return std::nullopt;
}

}  // namespace

RegimeResult regime_experiment(Family family, Regime regime, const RegimeParams& params,
                               int replicates, int centers, std::uint64_t seed) {
  if (params.grid.size() < 3) throw std::domain_error("regime_experiment: grid too small (>= 3)");
  std::vector<double> grid = params.grid;
  std::sort(grid.begin(), grid.end());
  const int d = family == Family::iid || family == Family::harmonic ? params.d : 2;
  double alpha = params.small_alpha > 0.0 ? params.small_alpha : 1.0 / (2.0 * d);
  if (regime == Regime::small && !(alpha > 0.0 && alpha < 1.0 / d))
    throw std::domain_error("regime_experiment: small-cap schedule needs 0 < alpha < 1/d");
  if (regime == Regime::threshold && params.threshold_size < 1)
    throw std::domain_error("regime_experiment: threshold regime needs a fixed size");

  RegimeResult result;
  result.family = family;
  result.regime = regime;

  for (double g : grid) {
    RegimeRow row;
    row.param = g;
    ProcessSpec spec;
    if (regime == Regime::threshold) {
      spec = make_spec(family, d, params.threshold_size);
      row.n_points = spec.point_count();
      row.phi = g * std::pow(static_cast<double>(row.n_points), -1.0 / d);
      if (family == Family::spherical)
        row.v_ref = g / (2.0 * std::sqrt(M_PI));
    } else {
      spec = make_spec(family, d, static_cast<int>(std::lround(g)));
      row.n_points = spec.point_count();
      row.phi = regime == Regime::large
                    ? params.phi
                    : params.small_c * std::pow(static_cast<double>(row.n_points), -alpha);
    }
    row.L = spec.family == Family::harmonic ? spec.L : 0;

    std::optional<double> semi_se;
    row.v_semi = semi_value(spec, row.phi, params.pairs_per_cell, seed, &semi_se);
    if (replicates > 0) {
      const VarianceReport mc = mc_number_variance(spec, row.phi, replicates, centers, seed);
      row.v_hat = mc.v_hat;
      row.std_err = mc.std_err;
    } else {
      if (!row.v_semi)
        throw std::domain_error("regime_experiment: no semi-analytic value and no replicates");
      row.v_hat = *row.v_semi;
      row.std_err = semi_se.value_or(0.0);
    }
    result.rows.push_back(row);
  }

  std::vector<std::pair<double, double>> pts;
  for (const RegimeRow& row : result.rows) {
    const double x = regime == Regime::threshold ? row.param : static_cast<double>(row.n_points);
    if (row.v_hat > 0.0) pts.emplace_back(x, row.v_hat);
  }
  const FitResult fit = fit_exponent(pts);
  result.fitted_exponent = fit.slope;
  result.fit_residual = fit.residual;
  result.r_squared = fit.r_squared;
  return result;
}

}  // namespace spherevar
