#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "freeprob/moments.hpp"

namespace fp = freeprob;
using fp::BigInt;
using fp::BigRational;
using fp::RationalPolynomial;

namespace {

BigRational q(long long p, long long d = 1) { return fp::make_rational(p, d); }

// [z^k] of M(z)^s, where M has coefficients m[0..].
std::vector<BigRational> power_series_pow(const std::vector<BigRational>& m, std::size_t s, std::size_t len) {
  std::vector<BigRational> out(len, 0);
  out[0] = 1;
  for (std::size_t r = 0; r < s; ++r) {
    std::vector<BigRational> next(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
      if (out[i] == 0) continue;
      for (std::size_t j = 0; i + j < len && j < m.size(); ++j) next[i + j] += out[i] * m[j];
    }
    out = std::move(next);
  }
  return out;
}

// Moment-cumulant relation M(z) = 1 + sum_s kappa_s z^s M(z)^s. Free cumulants
// add under free convolution, giving an oracle for every mixed moment that
// never touches Stirling numbers or the ODE.
std::vector<BigRational> free_cumulants(const std::vector<BigRational>& m) {
  const std::size_t n_max = m.size() - 1;
  std::vector<BigRational> kappa(n_max + 1, 0);
  for (std::size_t n = 1; n <= n_max; ++n) {
    BigRational rest = 0;
    for (std::size_t s = 1; s < n; ++s) rest += kappa[s] * power_series_pow(m, s, n - s + 1)[n - s];
    kappa[n] = m[n] - rest;
  }
  return kappa;
}

std::vector<BigRational> moments_from_cumulants(const std::vector<BigRational>& kappa) {
  const std::size_t n_max = kappa.size() - 1;
  std::vector<BigRational> m(n_max + 1, 0);
  m[0] = 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    BigRational sum = 0;
    for (std::size_t s = 1; s <= n; ++s) sum += kappa[s] * power_series_pow(m, s, n - s + 1)[n - s];
    m[n] = sum;
  }
  return m;
}

BigRational rpow(const BigRational& x, std::size_t n) {
  BigRational r = 1;
  for (std::size_t i = 0; i < n; ++i) r *= x;
  return r;
}

std::vector<BigRational> uniform_moments(const BigRational& b, const BigRational& c, std::size_t n_max) {
  std::vector<BigRational> m(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    m[n] = b == c ? rpow(c, n) : (rpow(c, n + 1) - rpow(b, n + 1)) / (BigRational(BigInt(n + 1)) * (c - b));
  }
  return m;
}

// Moments of sc(variance a) [+] Unif[b,c] via free cumulants.
std::vector<BigRational> cumulant_oracle(const BigRational& a, const BigRational& b, const BigRational& c,
                                         std::size_t n_max) {
  auto kappa = free_cumulants(uniform_moments(b, c, n_max));
  if (n_max >= 2) kappa[2] += a;
  return moments_from_cumulants(kappa);
}

}  // namespace

TEST(FreeCumulantOracle, SelfChecks) {
  // Semicircle of variance 1: Catalan numbers.
  const auto sc = cumulant_oracle(1, 0, 0, 6);
  EXPECT_EQ(sc[2], 1);
  EXPECT_EQ(sc[4], 2);
  EXPECT_EQ(sc[6], 5);
  EXPECT_EQ(sc[5], 0);
  const auto round = moments_from_cumulants(free_cumulants(uniform_moments(q(-1), q(3), 8)));
  EXPECT_EQ(round, uniform_moments(q(-1), q(3), 8));
}

TEST(MomentPolynomial, Examples) {
  EXPECT_EQ(fp::m_n_polynomial(0), RationalPolynomial::constant(1));
  EXPECT_EQ(fp::m_n_polynomial(1), RationalPolynomial::monomial(q(-1, 2), 1));
  EXPECT_EQ(fp::m_n_polynomial(2), RationalPolynomial::monomial(1, 1) + RationalPolynomial::monomial(q(1, 3), 2));
  EXPECT_EQ(fp::m_n_polynomial(2).to_string(), "t + 1/3 t^2");
  EXPECT_EQ(fp::m_n_polynomial(3).to_string(), "-3/2 t^2 - 1/4 t^3");
}

TEST(MomentPolynomial, MatchesFreeCumulantOracle) {
  // A degree-n polynomial is pinned by its values at n+1 points.
  for (std::size_t n = 0; n <= 12; ++n) {
    const auto p = fp::m_n_polynomial(n);
    for (long long k = 1; k <= static_cast<long long>(n) + 1; ++k) {
      const BigRational t = q(k, 3);
      EXPECT_EQ(p(t), cumulant_oracle(t, -t, 0, n)[n]) << "n=" << n << " t=" << k << "/3";
    }
  }
}

TEST(MomentPolynomial, EqualsOdeOracle) {
  const auto oracle = fp::moments_ode_oracle(30);
  ASSERT_EQ(oracle.size(), 31u);
  EXPECT_EQ(oracle[0], RationalPolynomial::constant(1));
  EXPECT_EQ(oracle[2].to_string(), "t + 1/3 t^2");
  EXPECT_EQ(oracle[3].to_string(), "-3/2 t^2 - 1/4 t^3");
  for (std::size_t n = 0; n <= 30; ++n) EXPECT_EQ(fp::m_n_polynomial(n), oracle[n]) << n;
}

TEST(MomentPolynomial, DegreeLeadingCoefficientAndVanishing) {
  for (std::size_t n = 0; n <= 30; ++n) {
    const auto p = fp::m_n_polynomial(n);
    EXPECT_EQ(p.degree(), static_cast<long>(n));
    EXPECT_EQ(p.coefficient(n), q(n % 2 == 0 ? 1 : -1, static_cast<long long>(n + 1)));
    for (std::size_t k = 0; k < (n + 1) / 2; ++k) EXPECT_EQ(p.coefficient(k), 0) << n << "," << k;
  }
}

TEST(GeneralMoments, Examples) {
  EXPECT_EQ(fp::moments_sc_unif_general(2, 1, 0, 0), 1);
  EXPECT_EQ(fp::moments_sc_unif_general(4, 1, 0, 0), 2);
  for (std::size_t n = 0; n <= 10; ++n) {
    const BigRational t = q(5, 7);
    EXPECT_EQ(fp::moments_sc_unif_general(n, t, -t, 0), fp::m_n_polynomial(n)(t));
  }
  EXPECT_THROW(fp::moments_sc_unif_general(2, 0, 0, 0), std::invalid_argument);
  EXPECT_THROW(fp::moments_sc_unif_general(2, 1, 1, 0), std::invalid_argument);
}

TEST(GeneralMoments, MatchesFreeCumulantOracle) {
  const BigRational params[][3] = {{q(1), q(-1), q(1)}, {q(1, 2), q(0), q(3)}, {q(2), q(-5, 2), q(1, 3)}, {q(3), q(1), q(1)}};
  for (const auto& p : params) {
    const auto oracle = cumulant_oracle(p[0], p[1], p[2], 10);
    for (std::size_t n = 0; n <= 10; ++n) EXPECT_EQ(fp::moments_sc_unif_general(n, p[0], p[1], p[2]), oracle[n]);
  }
}

TEST(GeneralMoments, ShiftConsistency) {
  // Shifting [b,c] by c is classical convolution with a point mass at c.
  const BigRational a = q(2, 3), b = q(-3, 2), c = q(5, 4);
  for (std::size_t n = 0; n <= 12; ++n) {
    BigRational shifted = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      shifted += BigRational(fp::binomial(n, k)) * rpow(c, n - k) * fp::moments_sc_unif_general(k, a, b - c, 0);
    }
    EXPECT_EQ(fp::moments_sc_unif_general(n, a, b, c), shifted);
  }
}

TEST(GeneralMoments, OddMomentsVanishForSymmetricUniform) {
  for (const BigRational c : {q(1, 2), q(1), q(7, 3)}) {
    for (std::size_t n = 1; n <= 15; n += 2) EXPECT_EQ(fp::moments_sc_unif_general(n, q(3, 5), -c, c), 0);
  }
}

TEST(MeasureSpec, ScalingEquivariance) {
  using M = fp::MeasureSpec;
  const M base = M::boxplus({M::semicircle_with_variance(q(1, 2)), M::uniform(q(-1), q(2))});
  for (const BigRational gamma : {q(2), q(-1, 3), q(5, 2)}) {
    const M scaled = M::scaled(gamma, base);
    for (std::size_t n = 0; n <= 8; ++n) EXPECT_EQ(fp::moment_exact(scaled, n), rpow(gamma, n) * fp::moment_exact(base, n));
  }
}

TEST(MeasureSpec, ResolveAndErrors) {
  using M = fp::MeasureSpec;
  const auto p = fp::resolve_sc_unif(M::boxplus({M::semicircle_with_variance(1), M::dirac(2), M::uniform(0, 1)}));
  EXPECT_EQ(p.a, 1);
  EXPECT_EQ(p.b, 2);
  EXPECT_EQ(p.c, 3);
  EXPECT_EQ(fp::moment_exact(M::uniform(q(-1), q(1)), 2), q(1, 3));
  EXPECT_EQ(fp::moment_exact(M::dirac(q(3)), 2), 9);
  EXPECT_THROW(fp::resolve_sc_unif(M::boxplus({M::uniform(0, 1), M::uniform(0, 2)})), std::invalid_argument);
  EXPECT_THROW(M::semicircle_with_variance(0), std::invalid_argument);
  EXPECT_THROW(M::uniform(2, 1), std::invalid_argument);
  EXPECT_THROW(M::nu(0), std::invalid_argument);
  EXPECT_THROW(fp::moment_exact(M::nu(1), 2), std::invalid_argument);
}

TEST(NuMoments, Examples) {
  for (double t : {0.1, 1.0, 4.0}) {
    EXPECT_NEAR(fp::moments_nu_laguerre(1, t), std::exp(t / 2), 1e-14 * std::exp(t / 2));
    EXPECT_NEAR(fp::moments_nu_laguerre(2, t), std::exp(t) * (1 + t), 1e-13 * std::exp(t) * (1 + t));
  }
  EXPECT_NEAR(fp::moments_nu_laguerre(1, 1e-12), 1.0, 1e-11);
  EXPECT_THROW(fp::moments_nu_laguerre(0, 2.0), std::invalid_argument);
}

TEST(NuMoments, LaguerreMatchesBinomialSum) {
  for (std::size_t n = 1; n <= 25; ++n) {
    for (double t : {0.1, 1.0, 4.0}) {
      const double lag = fp::moments_nu_laguerre(n, t);
      EXPECT_LT(std::abs(lag - fp::moments_nu_binomial_sum(n, t)), 1e-12 * lag);
    }
  }
}

TEST(NuMoments, ExpSeriesOfLogMomentsOracle) {
  // int e^{n x} over sc(var t) [+] Unif[-t/2,t/2], summed from exact moments
  // supplied by the free-cumulant oracle.
  const BigRational t = q(1, 2);
  const auto log_moments = cumulant_oracle(t, -t / 2, t / 2, 60);
  for (std::size_t n = 1; n <= 4; ++n) {
    double sum = 0.0, term_scale = 1.0;
    for (std::size_t k = 0; k <= 60; ++k) {
      if (k > 0) term_scale *= static_cast<double>(n) / static_cast<double>(k);
      sum += term_scale * static_cast<double>(log_moments[k]);
    }
    EXPECT_LT(std::abs(sum - fp::moments_nu_laguerre(n, 0.5)), 1e-12 * sum) << n;
  }
}

TEST(FractionalMoments, Examples) {
  for (double t : {0.5, 1.0, 2.0}) {
    EXPECT_LT(std::abs(fp::fractional_moment_nu(1.0, t) - std::exp(t / 2)), 1e-14 * std::exp(t / 2));
    EXPECT_LT(std::abs(fp::fractional_moment_nu(-1.0, t) - std::exp(t / 2)), 1e-12 * std::exp(t / 2));
  }
  EXPECT_LT(std::abs(fp::exp_mgf_additive(0.0, 1.0) - 1.0), 1e-15);
  EXPECT_LT(std::abs(fp::exp_mgf_additive(2.0, 1.0) - 2.0), 1e-15);
  EXPECT_THROW(fp::fractional_moment_nu(1.0, 0.0), std::invalid_argument);
}

TEST(FractionalMoments, IntegerAgreement) {
  for (std::size_t n = 1; n <= 20; ++n) {
    for (double t : {0.1, 1.0, 4.0}) {
      const double lag = fp::moments_nu_laguerre(n, t);
      EXPECT_LT(std::abs(fp::fractional_moment_nu(static_cast<double>(n), t) - lag), 1e-12 * lag) << n << "," << t;
    }
  }
}

TEST(FractionalMoments, MomentSeriesMatchesHypergeometric) {
  for (fp::Complex alpha : {fp::Complex(0.7, 0.0), fp::Complex(-0.4, 0.9), fp::Complex(1.5, -1.0)}) {
    const auto est = fp::exp_mgf_moment_series(alpha, 0.5, 60);
    const fp::Complex exact = fp::exp_mgf_additive(alpha, 0.5);
    EXPECT_LT(std::abs(est.value - exact), 1e-12 * std::abs(exact));
    EXPECT_LT(est.remainder_estimate, 1e-14);
  }
}

TEST(TheoremMain, MomentLevel) {
  auto r = fp::verify_theorem_main_moments(1, 0.3);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_TRUE(r.all_pass);
  EXPECT_NEAR(r.entries[0].pushforward, std::exp(0.15), 1e-15);
  for (double t : {0.1, 1.0, 4.0}) EXPECT_TRUE(fp::verify_theorem_main_moments(25, t).all_pass) << t;
}

TEST(MomentQuery, Validation) {
  using M = fp::MeasureSpec;
  using Q = fp::MomentQuery;
  Q exact{M::uniform(0, 1), std::size_t{2}, Q::Evaluation::exact_polynomial};
  EXPECT_EQ(std::get<BigRational>(fp::evaluate(exact)), q(1, 3));

  Q complex_on_additive{M::uniform(0, 1), fp::Complex(0.5, 1.0), Q::Evaluation::numeric};
  EXPECT_THROW(complex_on_additive.validate(), std::invalid_argument);

  Q complex_exact{M::nu(1), fp::Complex(0.5, 1.0), Q::Evaluation::exact_polynomial};
  EXPECT_THROW(complex_exact.validate(), std::invalid_argument);

  Q nu_alpha{M::nu(1), fp::Complex(-1.0, 0.0), Q::Evaluation::numeric};
  EXPECT_LT(std::abs(std::get<fp::Complex>(fp::evaluate(nu_alpha)) - std::exp(0.5)), 1e-12);

  // exp(sc(var t) [+] Unif[-t/2, t/2]) has the moments of nu_t.
  const M push = M::exp_pushforward(M::boxplus({M::semicircle_with_variance(1), M::uniform(q(-1, 2), q(1, 2))}));
  Q push_q{push, fp::Complex(3.0, 0.0), Q::Evaluation::numeric};
  EXPECT_LT(std::abs(std::get<fp::Complex>(fp::evaluate(push_q)) - fp::moments_nu_laguerre(3, 1.0)), 1e-10);

  Q scaled_nu{M::scaled(2, M::nu(1)), fp::Complex(1.0, 0.0), Q::Evaluation::numeric};
  EXPECT_LT(std::abs(std::get<fp::Complex>(fp::evaluate(scaled_nu)) - 2.0 * std::exp(0.5)), 1e-12);
}
