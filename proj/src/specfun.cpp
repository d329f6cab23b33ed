#include "spherevar/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace spherevar {

namespace {

// binom(n, k) in exact integer arithmetic.  The running product after step i
// equals binom(n-k+i, i), an integer, so the division is always exact.
__int128 binom_i128(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  const __int128 limit = std::numeric_limits<__int128>::max() >> 1;
  __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    if (r > limit / (n - k + i)) throw std::overflow_error("dim_z: binomial overflow");
    r = r * (n - k + i) / i;
  }
  return r;
}

double clamp_argument(double x, const char* who) {
  if (std::abs(x) > 1.0 + 1e-12 || std::isnan(x))
    throw std::domain_error(std::string(who) + ": argument outside [-1,1]");
  return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
}

void check_degree(int n, const char* who) {
  if (n < 0) throw std::domain_error(std::string(who) + ": negative degree");
  if (n > kMaxDegree) throw std::domain_error(std::string(who) + ": degree limit exceeded");
}

}  // namespace

std::int64_t dim_z(int d, int ell) {
  if (d < 1) throw std::domain_error("dim_z: require d >= 1");
  if (ell < 0) throw std::domain_error("dim_z: require ell >= 0");
  if (ell == 0) return 1;
  if (d == 1) return 2;
  const __int128 b = binom_i128(static_cast<std::int64_t>(ell) + d - 2, d - 2);
  const __int128 num = b * (2 * static_cast<std::int64_t>(ell) + d - 1);
  const __int128 z = num / (d - 1);
  if (z > std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error("dim_z: value exceeds int64 range");
  return static_cast<std::int64_t>(z);
}

double gamma_d(int d) {
  if (d < 1) throw std::domain_error("gamma_d: require d >= 1");
  return std::exp(std::lgamma(d) - (d - 1) * std::log(2.0) - 2.0 * std::lgamma(0.5 * d));
}

ZonalLegendre::ZonalLegendre(int d, double x) : d_(d), x_(clamp_argument(x, "legendre_pd")) {
  if (d < 2) throw std::domain_error("legendre_pd: require d >= 2");
}

double ZonalLegendre::next() {
  check_degree(n_, "legendre_pd");
  double value;
  if (n_ == 0) {
    value = 1.0;
  } else if (n_ == 1) {
    value = x_;
  } else {
    const int n = n_;
    value = ((2 * n + d_ - 3) * x_ * cur_ - (n - 1) * prev_) / (n + d_ - 2);
  }
  prev_ = cur_;
  cur_ = value;
  ++n_;
  return value;
}

double legendre_pd(int d, int n, double x) {
  check_degree(n, "legendre_pd");
  ZonalLegendre rec(d, x);
  double v = 0.0;
  for (int k = 0; k <= n; ++k) v = rec.next();
  return v;
}

double kernel_kl(int d, int L, double x) {
  check_degree(L, "kernel_kl");
  ZonalLegendre rec(d, x);
  double sum = 0.0;
  for (int ell = 0; ell <= L; ++ell)
    sum += static_cast<double>(dim_z(d, ell)) * rec.next();
  return sum;
}

double binom_real(double a, double k) {
  return std::exp(std::lgamma(a + 1.0) - std::lgamma(k + 1.0) - std::lgamma(a - k + 1.0));
}

double kernel_kl_jacobi(int d, int L, double x) {
  check_degree(L, "kernel_kl_jacobi");
  if (d < 2) throw std::domain_error("kernel_kl_jacobi: require d >= 2");
  x = clamp_argument(x, "kernel_kl_jacobi");
  const double a = 0.5 * d;
  const double b = 0.5 * d - 1.0;
  // Jacobi recurrence in (a, b); p holds P_n, pm holds P_{n-1}.
  double pm = 0.0, p = 1.0;
  if (L >= 1) {
    pm = p;
    p = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
  }
  for (int n = 2; n <= L; ++n) {
    const double s = n + a + b;  // 2n+a+b = n+s
    const double c1 = 2.0 * n * s * (n + s - 2.0);
    const double c2 = (n + s - 1.0) * (n + s) * (n + s - 2.0);
    const double c3 = (n + s - 1.0) * (a * a - b * b);
    const double c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (n + s);
    const double next = ((c2 * x + c3) * p - c4 * pm) / c1;
    pm = p;
    p = next;
  }
  return static_cast<double>(dim_z(d + 1, L)) / binom_real(L + 0.5 * d, L) * p;
}

}  // namespace spherevar
