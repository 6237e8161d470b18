#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "freeprob/rng.hpp"
#include "freeprob/specfun.hpp"

namespace fp = freeprob;
using fp::Complex;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Laguerre, Examples) {
  EXPECT_DOUBLE_EQ(fp::laguerre(0, 1.0, 123.4), 1.0);
  for (double t : {0.1, 1.0, 3.0}) EXPECT_NEAR(fp::laguerre(1, 1.0, -2.0 * t), 2.0 + 2.0 * t, 1e-14);
  EXPECT_NEAR(fp::laguerre(2, 1.0, 0.0), 3.0, 1e-15);
}

TEST(Laguerre, ThreeTermRecurrence) {
  // (n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1}
  for (double alpha : {0.0, 1.0, 2.5}) {
    for (double x : {-3.0, 0.5, 4.0}) {
      for (std::size_t n = 1; n < 12; ++n) {
        const double nd = static_cast<double>(n);
        const double lhs = (nd + 1) * fp::laguerre(n + 1, alpha, x);
        const double rhs = (2 * nd + 1 + alpha - x) * fp::laguerre(n, alpha, x) - (nd + alpha) * fp::laguerre(n - 1, alpha, x);
        EXPECT_NEAR(lhs, rhs, 1e-9 * (1 + std::abs(lhs)));
      }
    }
  }
}

TEST(Kummer, Examples) {
  EXPECT_EQ(fp::kummer_1f1(0.0, 2.0, {-5.0, 2.0}), Complex(1.0));
  EXPECT_LT(rel(fp::kummer_1f1(2.0, 2.0, 1.5), std::exp(1.5)), 1e-15);
  EXPECT_NEAR(std::abs(fp::kummer_1f1(-2.0, 2.0, -3.0) - 5.5), 0.0, 1e-15);
}

TEST(Kummer, ExponentialCaseOverWideRange) {
  for (double x = -20.0; x <= 20.0; x += 0.75) {
    EXPECT_LT(rel(fp::kummer_1f1(3.5, 3.5, x), std::exp(x)), 1e-14) << x;
  }
}

TEST(Kummer, PolynomialPathMatchesTruncatedSeries) {
  // Polynomial result vs the plain series summed without the early exit.
  for (int a = -1; a >= -8; --a) {
    for (double x = -10.0; x <= 10.0; x += 0.5) {
      long double term = 1, sum = 1;
      for (int j = 0; j < 60; ++j) {
        term *= (a + j) * static_cast<long double>(x) / ((2.0L + j) * (j + 1));
        sum += term;
      }
      const double poly = fp::kummer_1f1(a, 2.0, x).real();
      EXPECT_LE(std::abs(poly - static_cast<double>(sum)), 1e-13 * std::abs(static_cast<double>(sum)) + 1e-300);
    }
  }
}

TEST(Kummer, ErrorPaths) {
  EXPECT_THROW(fp::kummer_1f1(0.5, -2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(fp::kummer_1f1(-4.0, -2.0, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(fp::kummer_1f1(-2.0, -3.0, 1.0));
  EXPECT_THROW(fp::kummer_1f1(0.5, 1.5, 40.0, {1e-15, 5}), fp::convergence_error);
  EXPECT_THROW(fp::kummer_1f1(0.5, 1.5, 1.0, {0.0, 10}), std::invalid_argument);
}

TEST(EulerIntegral, Examples) {
  EXPECT_NEAR(fp::euler_integral_1f1(1.0, 2.0, 0.0), 1.0, 1e-14);
  EXPECT_NEAR(fp::euler_integral_1f1(1.0, 2.0, 1.0), std::exp(1.0) - 1.0, 1e-13);
  EXPECT_LT(std::abs(fp::euler_integral_1f1(2.0, 4.0, 0.7) - fp::kummer_1f1(2.0, 4.0, 0.7).real()), 1e-10);
  EXPECT_THROW(fp::euler_integral_1f1(2.0, 2.0, 0.0), std::invalid_argument);
  EXPECT_THROW(fp::euler_integral_1f1(0.0, 2.0, 0.0), std::invalid_argument);
}

TEST(EulerIntegral, AgreesWithSeries) {
  const std::pair<double, double> params[] = {{1, 2}, {2, 3}, {1, 3}, {2, 5}};
  for (auto [a, b] : params) {
    for (double x = -5.0; x <= 5.0; x += 0.25) {
      const double series = fp::kummer_1f1(a, b, x).real();
      EXPECT_LT(std::abs(fp::euler_integral_1f1(a, b, x) - series), 1e-10 * std::abs(series)) << a << "," << b << "," << x;
    }
  }
}

TEST(KummerTransform, Examples) {
  EXPECT_TRUE(fp::kummer_transform_check(1.0, 2.0, 0.0));
  EXPECT_TRUE(fp::kummer_transform_check(-3.0, 2.0, 1.2));
  EXPECT_TRUE(fp::kummer_transform_check(0.5, 2.5, -2.0));
}

TEST(KummerTransform, RandomSample) {
  fp::Xoshiro256 rng(99);
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform_open(); };
  for (int i = 0; i < 50; ++i) {
    const Complex a(u(-3, 3), u(-1, 1)), b(u(0.5, 4), u(-0.5, 0.5)), x(u(-5, 5), u(-3, 3));
    EXPECT_TRUE(fp::kummer_transform_check(a, b, x)) << a << b << x;
  }
}

TEST(KummerTransform, InternalTransformAgreesWithDirectSum) {
  // kummer_1f1 switches to the transformed series for Re x < -1.
  for (double x : {-1.5, -4.0, -9.0}) {
    const Complex direct = fp::detail::kummer_series_direct(0.3, 1.7, x, {});
    EXPECT_LT(rel(fp::kummer_1f1(0.3, 1.7, x), direct), 1e-12);
  }
}

TEST(LaguerreKummerLink, IntegerAlpha) {
  for (std::size_t n = 1; n <= 15; ++n) {
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
      const double nd = static_cast<double>(n);
      const double lhs = fp::laguerre(n - 1, 1.0, -nd * t) / nd;
      const double rhs = fp::kummer_1f1(1.0 - nd, 2.0, -nd * t).real();
      EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(rhs));
    }
  }
}

TEST(BetaIntegral, Examples) {
  EXPECT_EQ(fp::beta_integral_exact(0, 0), 1);
  EXPECT_EQ(fp::beta_integral_exact(1, 1), fp::make_rational(1, 6));
  EXPECT_EQ(fp::beta_integral_exact(2, 3), fp::make_rational(1, 60));
  for (std::size_t n = 0; n <= 20; ++n) {
    for (std::size_t k = 0; k <= 20; ++k) {
      EXPECT_EQ(fp::beta_integral_exact(n, k) * fp::BigRational(fp::BigInt(n + k + 1) * fp::binomial(n + k, n)), 1);
    }
  }
}

TEST(BetaIntegral, MatchesQuadrature) {
  for (std::size_t n = 0; n <= 5; ++n) {
    for (std::size_t k = 0; k <= 5; ++k) {
      // Euler integral of 1F1(n+1; n+k+2; 0) is B(n+1,k+1) times its normalization.
      const double quad = fp::euler_integral_1f1(n + 1.0, n + k + 2.0, 0.0) /
                          fp::detail::euler_normalization(n + 1.0, n + k + 2.0);
      EXPECT_NEAR(quad, static_cast<double>(fp::beta_integral_exact(n, k)), 1e-14);
    }
  }
}
