#pragma once

#include <span>
#include <vector>

namespace spherevar {

// Spherical cap C(x, phi) = { y in S^d : <x,y> > cos(phi) }.
struct Cap {
  Cap(std::vector<double> center_, double angle_);
  std::vector<double> center;  // unit vector, d+1 components
  double angle;                // opening angle in (0, pi]
  int sphere_dim() const { return static_cast<int>(center.size()) - 1; }
  bool contains(std::span<const double> p) const;
};

// Normalised surface area of a cap of opening angle phi on S^d:
//   sigma(C(phi)) = gamma_d * int_0^phi sin(t)^{d-1} dt.
// Closed form (1-cos phi)/2 for d=2; adaptive quadrature (abs tol 1e-12)
// for d >= 3.
double cap_area(int d, double phi);

// Laplace coefficient of the cap indicator for degree n >= 1:
//   a_n(phi) = gamma_d/d * sin(phi)^d * P_{n-1}^{(d+2)}(cos phi),
// equal to gamma_d * int_0^phi P_n^{(d)}(cos t) sin(t)^{d-1} dt.
double laplace_coefficient(int d, int n, double phi);

// Volume of the difference of two equal caps whose centers are a geodesic
// angle psi apart:
//   sigma(C(x,phi) \ C(y,phi)) = g_phi(1) - g_phi(cos psi)
//     = 1/pi * int_0^{psi/2} (sin^2 phi - sin^2 v)_+^{(d-1)/2} / cos(v)^{d-1} dv.
// d=2 uses the explicit arcsin formula; other d adaptive quadrature with
// abs tol 1e-11.  For psi >= 2*phi the caps are disjoint and the result is
// sigma(C(phi)).  Requires 0 < phi <= pi/2, 0 <= psi <= pi.
double cap_diff_volume(int d, double phi, double psi);

// sigma(C(x,phi) cap C(y,phi)) = cap_area(d,phi) - cap_diff_volume(d,phi,psi).
double cap_intersection_volume(int d, double phi, double psi);

// Partial sum of the Laplace series of the centered intersection volume,
//   g_phi(x) = sum_{n>=1} a_n(phi)^2 Z(d,n) P_n^{(d)}(x),
// through n = n_max.  Cross-validation oracle for
// cap_intersection_volume - sigma^2 only; tail decays like O(1/n_max) at
// x = +-1 and is much smaller for x inside (-1,1).
double g_phi_series(int d, double phi, double x, int n_max);

// Upper bound of the cap-difference volume:
//   sigma(C(x,phi) \ C(y,phi)) <= psi sin(phi)^{d-1} / (2 pi),
// valid for 0 <= psi <= 2 phi <= pi; for d <= 3 on all of
// [0,pi/2] x [0,pi].
double lemma5_upper_bound(int d, double phi, double psi);

}  // namespace spherevar
