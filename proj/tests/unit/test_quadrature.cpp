#include <gtest/gtest.h>

#include <cmath>

#include "pelvar/errors.hpp"
#include "pelvar/quadrature.hpp"

using namespace pelvar;

TEST(Quadrature, PolynomialIsExact) {
  const auto r = quad::gauss_kronrod([](double x) { return 3 * x * x + 2 * x; }, 0.0, 2.0);
  EXPECT_NEAR(r.value, 12.0, 1e-13);
}

TEST(Quadrature, OscillatoryIntegrand) {
  const auto r = quad::gauss_kronrod([](double x) { return std::sin(10 * x); }, 0.0, 3.0);
  EXPECT_NEAR(r.value, (1.0 - std::cos(30.0)) / 10.0, 1e-12);
}

TEST(Quadrature, EndpointSingularity) {
  // integral of log(x) on (0, 1) is -1
  const auto r = quad::gauss_kronrod([](double x) { return std::log(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, -1.0, 1e-10);
}

TEST(Quadrature, SemiInfiniteRange) {
  const auto r = quad::gauss_kronrod_upper([](double x) { return std::exp(-x); }, 0.0);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  const auto r2 = quad::gauss_kronrod_upper([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, {1e-10, 0, 2000}, 1e8);
  EXPECT_NEAR(r2.value, M_PI / 2 - std::atan(1e8) + std::atan(1e8), 1e-7);
}

TEST(Quadrature, UpperQuantileMeanOfExponential) {
  // ES of Exp(1) at p: 1 - ln(1 - p)
  const double p = 0.99;
  const auto r = quad::upper_quantile_mean([](double s) { return -std::log(s); }, p, 1.0 - p);
  EXPECT_NEAR(r.value, 1.0 - std::log(1.0 - p), 1e-11);
}
