#include "spherevar/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spherevar {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double clamp1(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

// Geodesic diameter of the box [t1,t2] x [0,W] on S^2.  For fixed polar
// angles the distance is maximised at azimuth separation min(W, pi); the
// remaining minimisation of
//   f(t,t') = cos t cos t' + cos(min(W,pi)) sin t sin t'
// over [t1,t2]^2 attains its minimum at a corner, at the interior critical
// point (pi/2, pi/2), or at a per-edge critical angle, all checked below.
double box_diameter(double t1, double t2, double W) {
  const double ca = std::cos(std::min(W, M_PI));
  std::vector<double> cand = {t1, t2};
  if (t1 < 0.5 * M_PI && 0.5 * M_PI < t2) cand.push_back(0.5 * M_PI);
  double best = 1.0;
  for (double a : cand)
    for (double b : cand)
      best = std::min(best, std::cos(a) * std::cos(b) + ca * std::sin(a) * std::sin(b));
  for (double edge : cand) {
    const double A = std::cos(edge), B = ca * std::sin(edge);
    double tstar = std::atan2(B, A) + M_PI;
    if (tstar > M_PI) tstar -= kTwoPi;
    if (t1 <= tstar && tstar <= t2)
      best = std::min(best, A * std::cos(tstar) + B * std::sin(tstar));
  }
  return std::acos(clamp1(best));
}

}  // namespace

double Cell::area() const {
  return (std::cos(theta1) - std::cos(theta2)) * (alpha2 - alpha1) / (4.0 * M_PI);
}

double Cell::diameter() const {
  const double W = alpha2 - alpha1;
  if (W >= kTwoPi - 1e-12) {
    if (theta1 <= 1e-12) return std::min(2.0 * theta2, M_PI);  // north cap
    if (theta2 >= M_PI - 1e-12) return std::min(2.0 * (M_PI - theta1), M_PI);  // south cap
  }
  return box_diameter(theta1, theta2, W);
}

ZonalPartition::ZonalPartition(int n_cells) : n_(n_cells) {
  if (n_cells < 1) throw std::domain_error("ZonalPartition: require n_cells >= 1");
  if (n_ == 1) {
    cells_.push_back({0.0, M_PI, 0.0, kTwoPi, 0});
    band_z_ = {1.0, -1.0};
    band_first_ = {0};
    band_count_ = {1};
    return;
  }

  const double z_cap = 1.0 - 2.0 / n_;  // polar caps of area 1/N
  const double theta_cap = std::acos(z_cap);

  std::vector<int> arcs_per_collar;
  if (n_ > 2) {
    const int n_rest = n_ - 2;
    const double band_height = M_PI - 2.0 * theta_cap;
    const double ideal_height = std::sqrt(4.0 * M_PI / n_);
    const int n_collars =
        std::max(1, static_cast<int>(std::lround(band_height / ideal_height)));
    const double collar_height = band_height / n_collars;

    // ideal (real) cell count per collar, then largest-remainder rounding
    std::vector<double> ideal(n_collars);
    for (int i = 0; i < n_collars; ++i) {
      const double a = theta_cap + i * collar_height;
      const double b = a + collar_height;
      ideal[i] = n_ * 0.5 * (std::cos(a) - std::cos(b));
    }
    arcs_per_collar.resize(n_collars);
    int assigned = 0;
    for (int i = 0; i < n_collars; ++i) {
      arcs_per_collar[i] = static_cast<int>(std::floor(ideal[i]));
      assigned += arcs_per_collar[i];
    }
    std::vector<int> order(n_collars);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return ideal[a] - std::floor(ideal[a]) > ideal[b] - std::floor(ideal[b]);
    });
    for (int k = 0; k < n_rest - assigned; ++k) arcs_per_collar[order[k]] += 1;
    // a collar must hold at least one cell; steal from the largest if needed
    for (int i = 0; i < n_collars; ++i) {
      if (arcs_per_collar[i] == 0) {
        const int big = static_cast<int>(
            std::max_element(arcs_per_collar.begin(), arcs_per_collar.end()) -
            arcs_per_collar.begin());
        arcs_per_collar[big] -= 1;
        arcs_per_collar[i] += 1;
      }
    }
  }

  // Re-level: the boundary below band k sits at z = 1 - 2 * (cells so far)/N,
  // which makes every cell area exactly 1/N.
  band_z_.push_back(1.0);
  band_first_.push_back(0);
  band_count_.push_back(1);
  cells_.push_back({0.0, theta_cap, 0.0, kTwoPi, 0});
  band_z_.push_back(z_cap);

  int placed = 1;
  double theta_prev = theta_cap;
  for (int m : arcs_per_collar) {
    placed += m;
    const double z_next = (placed == n_ - 1) ? -z_cap : 1.0 - 2.0 * placed / n_;
    const double theta_next = std::acos(clamp1(z_next));
    const double w = kTwoPi / m;
    band_first_.push_back(static_cast<int>(cells_.size()));
    band_count_.push_back(m);
    for (int k = 0; k < m; ++k)
      cells_.push_back(
          {theta_prev, theta_next, k * w, (k + 1) * w, static_cast<int>(cells_.size())});
    band_z_.push_back(z_next);
    theta_prev = theta_next;
  }

  band_first_.push_back(static_cast<int>(cells_.size()));
  band_count_.push_back(1);
  cells_.push_back(
      {M_PI - theta_cap, M_PI, 0.0, kTwoPi, static_cast<int>(cells_.size())});
  band_z_.push_back(-1.0);
}

int ZonalPartition::locate(std::span<const double> p) const {
  const double z = clamp1(p[2]);
  // band b covers [band_z_[b+1], band_z_[b]); ties go to the northern band
  int lo = 0, hi = static_cast<int>(band_count_.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (z >= band_z_[mid + 1])
      hi = mid;
    else
      lo = mid + 1;
  }
  const int band = lo;
  const int m = band_count_[band];
  if (m == 1) return band_first_[band];
  double alpha = std::atan2(p[1], p[0]);
  if (alpha < 0.0) alpha += kTwoPi;
  int k = static_cast<int>(alpha / (kTwoPi / m));
  if (k >= m) k = m - 1;
  return band_first_[band] + k;
}

void ZonalPartition::sample_in_cell(int index, RandomStream& rng,
                                    std::span<double> out) const {
  if (index < 0 || index >= n_) throw std::domain_error("sample_in_cell: bad index");
  if (out.size() != 3) throw std::domain_error("sample_in_cell: output must be 3-d");

  // band of this cell, and the exact z boundaries locate() compares against
  int band = static_cast<int>(band_first_.size()) - 1;
  while (band_first_[band] > index) --band;
  const double z_north = band_z_[band];
  const double z_south = band_z_[band + 1];
  const Cell& c = cells_[index];

  const double u = rng.uniform01();
  const double v = rng.uniform01();
  double z = z_south + u * (z_north - z_south);
  double alpha = c.alpha1 + v * (c.alpha2 - c.alpha1);
  // rounding can land exactly on the half-open boundary owned by a
  // neighbouring cell; pull back by one ulp
  if (z >= z_north && band != 0) z = std::nextafter(z_north, -2.0);
  if (alpha >= c.alpha2 && c.alpha2 < kTwoPi) alpha = std::nextafter(alpha, -1.0);

  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  out[0] = s * std::cos(alpha);
  out[1] = s * std::sin(alpha);
  out[2] = z;
  if (locate(out) != index) {
    // can only be reached through boundary-rounding corner cases; re-seat at
    // the cell's interior midpoint (measure-zero perturbation, no rejection)
    z = 0.5 * (z_north + z_south);
    alpha = 0.5 * (c.alpha1 + c.alpha2);
    const double s2 = std::sqrt(std::max(0.0, 1.0 - z * z));
    out[0] = s2 * std::cos(alpha);
    out[1] = s2 * std::sin(alpha);
    out[2] = z;
  }
}

double ZonalPartition::max_diameter() const {
  double m = 0.0;
  for (const Cell& c : cells_) m = std::max(m, c.diameter());
  return m;
}

}  // namespace spherevar
