#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace spherevar {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1], computed
// by Newton iteration on P_n.  Results for a given n are cached.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

// One n-point panel over [a,b].
template <typename F>
double gl_panel(const F& f, double a, double b, const GaussLegendreRule& rule) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * s;
}

namespace detail {
template <typename F>
double adaptive_rec(const F& f, double a, double b, double whole, double tol,
                    const GaussLegendreRule& rule, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl_panel(f, a, mid, rule);
  const double right = gl_panel(f, mid, b, rule);
  const double err = std::abs(left + right - whole);
  if (err <= tol || depth <= 0) return left + right;
  return adaptive_rec(f, a, mid, left, 0.5 * tol, rule, depth - 1) +
         adaptive_rec(f, mid, b, right, 0.5 * tol, rule, depth - 1);
}
}  // namespace detail

// Adaptive Gauss-Legendre integration: 15-node panels, recursive bisection,
// absolute tolerance abs_tol.
template <typename F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol,
                          int max_depth = 48) {
  if (a == b) return 0.0;
  const GaussLegendreRule& rule = gauss_legendre(15);
  const double whole = gl_panel(f, a, b, rule);
  return detail::adaptive_rec(f, a, b, whole, abs_tol, rule, max_depth);
}

// Composite 15-node Gauss-Legendre over a fixed number of equal panels.
template <typename F>
double integrate_composite(const F& f, double a, double b, int panels) {
  const GaussLegendreRule& rule = gauss_legendre(15);
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + (b - a) * i / panels;
    const double x1 = a + (b - a) * (i + 1) / panels;
    s += gl_panel(f, x0, x1, rule);
  }
  return s;
}

// Neumaier compensated summation over a fixed-order range.
double compensated_sum(std::span<const double> values);

}  // namespace spherevar
