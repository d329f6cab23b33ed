#pragma once

#include <cstdint>

namespace spherevar {

// Hard ceiling on polynomial degrees accepted by the recurrences below.
inline constexpr int kMaxDegree = 4096;

// Dimension Z(d,l) of the space of spherical harmonics of degree l on S^d:
//   Z(d,l) = (2l+d-1)/(d-1) * binom(l+d-2, d-2).
// Exact integer arithmetic; throws std::overflow_error if the value (or an
// intermediate product) exceeds the int64 range.  The degenerate case d=1
// uses the circle convention Z(1,0)=1, Z(1,l)=2, so the formula's division
// by d-1 never occurs.
std::int64_t dim_z(int d, int ell);

// Normalisation constant gamma_d = (int_0^pi sin(t)^{d-1} dt)^{-1}
//                                = Gamma(d) / (2^{d-1} Gamma(d/2)^2).
double gamma_d(int d);

// Legendre polynomial for the sphere S^d, normalised by P_n^{(d)}(1) = 1.
// For d >= 2 these are Gegenbauer polynomials C_n^{(d-1)/2} divided by their
// value at 1.  Evaluated by the normalised three-term recurrence
//   P_n(x) = ((2n+d-3) x P_{n-1}(x) - (n-1) P_{n-2}(x)) / (n+d-2),
// which avoids the overflow of C_n^lambda(1) at large n.  Inputs with
// |x| <= 1 + 1e-12 are clamped to [-1,1]; larger |x| is a domain error, as is
// n > kMaxDegree.
double legendre_pd(int d, int n, double x);

// Streaming evaluator for P_0^{(d)}(x), P_1^{(d)}(x), ... at fixed (d, x).
// Each call to next() returns the polynomial of the next degree.
class ZonalLegendre {
 public:
  ZonalLegendre(int d, double x);
  double next();
  int degree() const { return n_; }  // degree returned by the next call

 private:
  int d_;
  double x_;
  int n_ = 0;
  double prev_ = 0.0, cur_ = 0.0;
};

// Projection kernel onto spherical harmonics of degree <= L on S^d,
//   K_L(x) = sum_{l=0}^{L} Z(d,l) P_l^{(d)}(x),
// evaluated by the term-by-term sum (reference implementation).
// K_L(1) = Z(d+1, L), the number of points of the harmonic ensemble.
double kernel_kl(int d, int L, double x);

// Same kernel through the closed Jacobi form
//   K_L(x) = Z(d+1,L) / binom(L+d/2, L) * P_L^{(d/2, d/2-1)}(x),
// with the Jacobi polynomial evaluated by its standard three-term
// recurrence.  Used as an independent cross-check of kernel_kl.
double kernel_kl_jacobi(int d, int L, double x);

// Real-valued binomial coefficient binom(a, k) = Gamma(a+1)/(Gamma(k+1)Gamma(a-k+1)).
double binom_real(double a, double k);

}  // namespace spherevar
