#include "spherevar/capgeom.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spherevar/quadrature.hpp"
#include "spherevar/specfun.hpp"

namespace spherevar {

namespace {

void check_dim(int d, const char* who) {
  if (d < 2) throw std::domain_error(std::string(who) + ": require d >= 2");
}

double dot_unit(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Cap::Cap(std::vector<double> center_, double angle_)
    : center(std::move(center_)), angle(angle_) {
  if (center.size() < 3) throw std::domain_error("Cap: center must have >= 3 components");
  const double norm2 = dot_unit(center, center);
  if (std::abs(norm2 - 1.0) > 2e-12) throw std::domain_error("Cap: center not a unit vector");
  if (!(angle > 0.0 && angle <= M_PI)) throw std::domain_error("Cap: angle outside (0, pi]");
}

bool Cap::contains(std::span<const double> p) const {
  return dot_unit(center, p) > std::cos(angle);
}

double cap_area(int d, double phi) {
  check_dim(d, "cap_area");
  if (!(phi >= 0.0 && phi <= M_PI)) throw std::domain_error("cap_area: phi outside [0, pi]");
  if (d == 2) return 0.5 * (1.0 - std::cos(phi));
  const double v = integrate_adaptive(
      [d](double t) { return std::pow(std::sin(t), d - 1); }, 0.0, phi, 1e-12);
  return gamma_d(d) * v;
}

double laplace_coefficient(int d, int n, double phi) {
  check_dim(d, "laplace_coefficient");
  if (n < 1) throw std::domain_error("laplace_coefficient: require n >= 1");
  if (!(phi >= 0.0 && phi <= M_PI))
    throw std::domain_error("laplace_coefficient: phi outside [0, pi]");
  return gamma_d(d) / d * std::pow(std::sin(phi), d) * legendre_pd(d + 2, n - 1, std::cos(phi));
}

double cap_diff_volume(int d, double phi, double psi) {
  check_dim(d, "cap_diff_volume");
  if (!(phi > 0.0 && phi <= 0.5 * M_PI))
    throw std::domain_error("cap_diff_volume: phi outside (0, pi/2]");
  if (!(psi >= 0.0 && psi <= M_PI))
    throw std::domain_error("cap_diff_volume: psi outside [0, pi]");
  if (psi == 0.0) return 0.0;
  if (psi >= 2.0 * phi) return cap_area(d, phi);  // disjoint caps
  if (d == 2) {
    const double h = std::sin(0.5 * psi) / std::sin(phi);
    const double t = std::tan(0.5 * psi) / std::tan(phi);
    return (std::asin(std::min(1.0, h)) -
            std::asin(std::min(1.0, t)) * std::cos(phi)) / M_PI;
  }
  // sin^2(phi) - sin^2(v) = sin(phi-v) sin(phi+v), stable near v = phi
  const auto integrand = [d, phi](double v) {
    const double s2 = std::sin(phi - v) * std::sin(phi + v);
    if (s2 <= 0.0) return 0.0;
    return std::pow(s2, 0.5 * (d - 1)) / std::pow(std::cos(v), d - 1);
  };
  return integrate_adaptive(integrand, 0.0, 0.5 * psi, 1e-11) / M_PI;
}

double cap_intersection_volume(int d, double phi, double psi) {
  const double v = cap_area(d, phi) - cap_diff_volume(d, phi, psi);
  return v < 0.0 ? 0.0 : v;
}

double g_phi_series(int d, double phi, double x, int n_max) {
  check_dim(d, "g_phi_series");
  if (n_max < 1) throw std::domain_error("g_phi_series: require n_max >= 1");
  const double scale = gamma_d(d) / d * std::pow(std::sin(phi), d);
  ZonalLegendre at_phi(d + 2, std::cos(phi));  // streams P_{n-1}^{(d+2)}(cos phi)
  ZonalLegendre at_x(d, x);
  at_x.next();  // skip degree 0
  double sum = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double a_n = scale * at_phi.next();
    sum += a_n * a_n * static_cast<double>(dim_z(d, n)) * at_x.next();
  }
  return sum;
}

double lemma5_upper_bound(int d, double phi, double psi) {
  check_dim(d, "lemma5_upper_bound");
  const bool generic = psi >= 0.0 && 2.0 * phi <= M_PI && psi <= 2.0 * phi;
  const bool low_dim = d <= 3 && phi >= 0.0 && phi <= 0.5 * M_PI && psi >= 0.0 && psi <= M_PI;
  if (!generic && !low_dim)
    throw std::domain_error("lemma5_upper_bound: (phi, psi) outside validity region");
  return psi * std::pow(std::sin(phi), d - 1) / (2.0 * M_PI);
}

}  // namespace spherevar
