// Scalar figures of merit: SNR, referred noise, fringe visibility, and the
// conditional token correctness.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "memtwin/metrics.hpp"

using namespace memtwin;

TEST_CASE("snr") {
  CHECK(snr({0.5, 0.1, 1.0}) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(snr({0.1, 0.1, 1.0}) == doctest::Approx(0.0));
  CHECK(std::isinf(snr({0.2, 0.0, 1.0})));
  CHECK(snr({0.2, 0.0, 1.0}) > 0.0);
  CHECK(std::isinf(snr({0.0, 0.0, 0.0})));  // zero-noise sentinel
  CHECK_THROWS_AS(snr({0.1, 0.2, 1.0}), std::invalid_argument);   // exp < noise
  CHECK_THROWS_AS(snr({0.1, -0.1, 1.0}), std::invalid_argument);  // negative
}

TEST_CASE("mu1") {
  CHECK(mu1({0.5, 0.0231, 1.0}, 0.33) ==
        doctest::Approx(0.07).epsilon(1e-12));
  CHECK(mu1({0.5, 0.0, 1.0}, 0.33) == doctest::Approx(0.0));
  CHECK_THROWS_AS(mu1({0.5, 0.1, 1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mu1({0.5, 0.1, 1.0}, -0.2), std::invalid_argument);
  CHECK_THROWS_AS(mu1({0.1, 0.2, 1.0}, 0.5), std::invalid_argument);
}

TEST_CASE("visibility") {
  CHECK(visibility(0.474127563773199, 0.113622436226800) ==
        doctest::Approx((0.474127563773199 - 0.113622436226800) /
                        (0.474127563773199 + 0.113622436226800))
            .epsilon(1e-14));
  CHECK(visibility(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(visibility(0.7, 0.7) == doctest::Approx(0.0));
  CHECK_THROWS_AS(visibility(0.3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(visibility(0.5, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(visibility(0.0, 0.0), std::domain_error);
}

TEST_CASE("token correctness") {
  // Symmetric clicks: both outcomes equally credible.
  const auto [c0, c1] = token_correctness(0.5, 0.5);
  CHECK(c0 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(c1 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  // Deterministic correct detector.
  const auto [d0, d1] = token_correctness(1.0, 0.0);
  CHECK(d0 == doctest::Approx(1.0));
  CHECK(d1 == doctest::Approx(0.0));

  // Generic values against the closed form.
  const double p0 = 0.8;
  const double p1 = 0.1;
  const double denom = 1.0 - (1.0 - p0) * (1.0 - p1);
  const auto [e0, e1] = token_correctness(p0, p1);
  CHECK(e0 == doctest::Approx(p0 * (1.0 - p1) / denom).epsilon(1e-14));
  CHECK(e1 == doctest::Approx(p1 * (1.0 - p0) / denom).epsilon(1e-14));

  CHECK_THROWS_AS(token_correctness(0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(token_correctness(-0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(token_correctness(0.5, 1.2), std::invalid_argument);
}
