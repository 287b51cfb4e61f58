#include "memtwin/polynomials.hpp"

#include <cmath>
#include <stdexcept>

namespace memtwin {

namespace {

// exp(lgamma) ratios stay exact to ~1e-15 relative for the small integer
// arguments used here; all arguments are >= 1 under the preconditions.
double factorial_ratio(int num_a, int den_a, int num_b, int den_b) {
  return std::exp(std::lgamma(num_a + 1.0) - std::lgamma(den_a + 1.0) +
                  std::lgamma(num_b + 1.0) - std::lgamma(den_b + 1.0));
}

double ipow(double base, int n) {
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= base;
  return p;
}

}  // namespace

double jacobi_polynomial(int n, int a, int b, double x) {
  if (n < 0 || n + a < 0 || n + b < 0 || n + a + b < 0) {
    throw std::invalid_argument("jacobi_polynomial: parameters out of domain");
  }
  if (n == 0) return 1.0;
  if (a <= -1) {
    const int mu = -a;
    const double c = factorial_ratio(n - mu, n, n + b, n + b - mu);
    return c * ipow((x - 1.0) / 2.0, mu) * jacobi_polynomial(n - mu, mu, b, x);
  }
  if (b <= -1) {
    const int nu = -b;
    const double c = factorial_ratio(n - nu, n, n + a, n + a - nu);
    return c * ipow((x + 1.0) / 2.0, nu) * jacobi_polynomial(n - nu, a, nu, x);
  }
  double p0 = 1.0;
  double p1 = (a - b) / 2.0 + (1.0 + (a + b) / 2.0) * x;
  for (int k = 2; k <= n; ++k) {
    const double c1 = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0);
    const double c2 =
        (2.0 * k + a + b - 1.0) *
        ((2.0 * k + a + b) * (2.0 * k + a + b - 2.0) * x + a * a - b * b);
    const double c3 =
        2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b);
    const double next = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = next;
  }
  return p1;
}

double generalized_laguerre(int n, int m, double x) {
  if (n < 0 || m < 0) {
    throw std::invalid_argument("generalized_laguerre: n, m must be >= 0");
  }
  if (n == 0) return 1.0;
  double l0 = 1.0;
  double l1 = 1.0 + m - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + m - x) * l1 - (k + m) * l0) / (k + 1.0);
    l0 = l1;
    l1 = next;
  }
  return l1;
}

}  // namespace memtwin
