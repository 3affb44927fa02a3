#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "wnm/special.hpp"

using namespace wnm;

TEST_CASE("normal cdf reference values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-13));
  CHECK(normal_cdf(-1.0) == doctest::Approx(1.0 - 0.8413447460685429).epsilon(1e-13));
  CHECK(normal_cdf(3.0) == doctest::Approx(0.9986501019683699).epsilon(1e-13));
  // symmetry
  for (double x : {0.1, 0.7, 1.9, 3.3, 5.5})
    CHECK(normal_cdf(x) + normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("normal quantile inverts the cdf") {
  for (double p : {1e-10, 1e-6, 0.001, 0.1, 0.5, 0.9, 0.999, 1.0 - 1e-9}) {
    double z = normal_quantile(p);
    CHECK(normal_cdf(z) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("log normal cdf matches direct evaluation and the tail expansion") {
  for (double x : {-8.0, -4.0, -1.0, 0.0, 2.0})
    CHECK(log_normal_cdf(x) == doctest::Approx(std::log(normal_cdf(x))).epsilon(1e-11));
  // Far tail: log F(-x) = -x^2/2 - log x - log sqrt(2 pi) + log(1 - 1/x^2 + 3/x^4 - ...)
  double x = 40.0;
  double ref = -0.5 * x * x - std::log(x) - 0.5 * std::log(2.0 * M_PI) +
               std::log1p(-1.0 / (x * x) + 3.0 / (x * x * x * x));
  CHECK(log_normal_cdf(-x) == doctest::Approx(ref).epsilon(1e-8));
  CHECK(std::isfinite(log_normal_cdf(-300.0)));
}

TEST_CASE("regularised lower incomplete gamma closed forms") {
  // P(1, z) = 1 - e^{-z}
  for (double z : {0.0, 0.3, 1.0, 4.0, 20.0})
    CHECK(reg_lower_gamma(1.0, z) == doctest::Approx(-std::expm1(-z)).epsilon(1e-12));
  // P(1/2, z) = erf(sqrt(z))
  for (double z : {0.1, 0.5, 2.0, 9.0})
    CHECK(reg_lower_gamma(0.5, z) == doctest::Approx(std::erf(std::sqrt(z))).epsilon(1e-12));
  CHECK(reg_lower_gamma(3.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("inverse incomplete gamma reference values") {
  CHECK(inverse_lower_incomplete_gamma(0.0, 1.0) == doctest::Approx(0.0));
  CHECK(inverse_lower_incomplete_gamma(0.5, 1.0) == doctest::Approx(0.693147).epsilon(1e-5));
  CHECK(inverse_lower_incomplete_gamma(0.5, 0.5) == doctest::Approx(0.227468).epsilon(1e-5));
}

TEST_CASE("inverse incomplete gamma round trip and monotonicity") {
  for (double a : {0.3, 0.5, 1.0, 2.0, 5.0}) {
    double prev = -1.0;
    for (double p : {1e-8, 1e-4, 0.01, 0.2, 0.5, 0.8, 0.99, 0.99999}) {
      double z = inverse_lower_incomplete_gamma(p, a);
      CHECK(z > prev);
      prev = z;
      CHECK(reg_lower_gamma(a, z) == doctest::Approx(p).epsilon(1e-9));
    }
  }
}

TEST_CASE("inverse incomplete gamma rejects out-of-range p") {
  CHECK_THROWS_AS(inverse_lower_incomplete_gamma(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(inverse_lower_incomplete_gamma(-0.1, 1.0), std::domain_error);
}
