// Jacobi / generalized-Laguerre evaluation against independently computed
// reference values, classical identities, and the negative-integer-parameter
// reductions used by the beamsplitter matrix elements.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "memtwin/polynomials.hpp"

using memtwin::generalized_laguerre;
using memtwin::jacobi_polynomial;

namespace {

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
  return v;
}

}  // namespace

TEST_CASE("jacobi degenerate and low degrees") {
  CHECK(jacobi_polynomial(0, 2, 3, 0.7) == doctest::Approx(1.0).epsilon(1e-14));
  // P_1^{(a,b)}(x) = (a+1) + (a+b+2)(x-1)/2
  CHECK(jacobi_polynomial(1, 1, 2, 0.3) ==
        doctest::Approx(0.25).epsilon(1e-14));
  // Legendre special case P_3(x) = (5x^3 - 3x)/2
  CHECK(jacobi_polynomial(3, 0, 0, 0.5) ==
        doctest::Approx(-0.4375).epsilon(1e-14));
}

TEST_CASE("jacobi reference values, nonnegative parameters") {
  CHECK(jacobi_polynomial(4, 2, 1, -0.6) ==
        doctest::Approx(-0.8719999999999997).epsilon(1e-13));
  CHECK(jacobi_polynomial(5, 3, 2, 0.25) ==
        doctest::Approx(0.7948913574218754).epsilon(1e-13));
  CHECK(jacobi_polynomial(6, 1, 4, 0.9) ==
        doctest::Approx(-0.19770537499999968).epsilon(1e-12));
}

TEST_CASE("jacobi value at x = 1 is binomial(n + a, n)") {
  for (int n = 0; n <= 8; ++n) {
    for (int a = 0; a <= 4; ++a) {
      for (int b = 0; b <= 4; ++b) {
        CHECK(jacobi_polynomial(n, a, b, 1.0) ==
              doctest::Approx(binom(n + a, n)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("jacobi reflection symmetry") {
  // P_n^{(a,b)}(-x) = (-1)^n P_n^{(b,a)}(x)
  for (int n = 0; n <= 7; ++n) {
    for (double x : {-0.8, -0.3, 0.0, 0.45, 0.9}) {
      const double lhs = jacobi_polynomial(n, 2, 5, -x);
      const double rhs = (n % 2 ? -1.0 : 1.0) * jacobi_polynomial(n, 5, 2, x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("jacobi negative integer parameters") {
  // Reference values from a high-precision evaluation of the analytic
  // continuation (limit a -> negative integer).
  CHECK(jacobi_polynomial(2, -1, 1, 0.3) ==
        doctest::Approx(-0.315).epsilon(1e-13));
  CHECK(jacobi_polynomial(3, -2, 1, 0.4) ==
        doctest::Approx(0.27).epsilon(1e-13));
  CHECK(jacobi_polynomial(4, -3, 2, 0.6) ==
        doctest::Approx(-0.104).epsilon(1e-12));
  CHECK(jacobi_polynomial(3, 1, -2, 0.5) ==
        doctest::Approx(0.84375).epsilon(1e-13));
  CHECK(jacobi_polynomial(4, 2, -3, -0.2) ==
        doctest::Approx(-0.384).epsilon(1e-12));
}

TEST_CASE("laguerre low orders and closed forms") {
  CHECK(generalized_laguerre(0, 0, 1.3) == doctest::Approx(1.0));
  // L_1^{(m)}(x) = 1 + m - x
  CHECK(generalized_laguerre(1, 2, 0.5) == doctest::Approx(2.5).epsilon(1e-14));
  // L_2^{(0)}(x) = x^2/2 - 2x + 1
  CHECK(generalized_laguerre(2, 0, 0.75) ==
        doctest::Approx(0.75 * 0.75 / 2.0 - 1.5 + 1.0).epsilon(1e-14));
}

TEST_CASE("laguerre reference values") {
  CHECK(generalized_laguerre(3, 2, 1.5) ==
        doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(generalized_laguerre(5, 0, 2.0) ==
        doctest::Approx(0.7333333333333334).epsilon(1e-13));
  CHECK(generalized_laguerre(7, 1, 0.8) ==
        doctest::Approx(-1.5711875657142857).epsilon(1e-12));
  CHECK(generalized_laguerre(10, 3, 1.1) ==
        doctest::Approx(-13.467830153340818).epsilon(1e-12));
}

TEST_CASE("laguerre value at zero is binomial(n + m, n)") {
  for (int n = 0; n <= 10; ++n) {
    for (int m = 0; m <= 4; ++m) {
      CHECK(generalized_laguerre(n, m, 0.0) ==
            doctest::Approx(binom(n + m, n)).epsilon(1e-12));
    }
  }
}
