#pragma once

// Laguerre polynomials, Kummer's confluent hypergeometric function 1F1, and
// the numerical oracles used to cross-check 1F1 (Euler integral, Kummer
// transformation, beta integral).

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

#include "freeprob/errors.hpp"
#include "freeprob/exactcomb.hpp"

namespace freeprob {

using Complex = std::complex<double>;

/// Truncation contract for the 1F1 series.
struct SeriesPolicy {
  double relative_tolerance = 1e-15;
  std::size_t max_terms = 10'000;

  void validate() const {
    if (!(relative_tolerance > 0.0 && relative_tolerance < 1.0)) {
      throw std::invalid_argument("SeriesPolicy: relative_tolerance must lie in (0,1)");
    }
    if (max_terms < 1) throw std::invalid_argument("SeriesPolicy: max_terms must be >= 1");
  }
};

namespace detail {

inline bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

inline bool is_positive_integer(double x) { return x > 0.0 && x == std::round(x); }

inline void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw numerical_error(std::string(what) + ": non-finite result");
  }
}

// Direct summation of sum_j a^{(j)}/b^{(j)} x^j/j! via the term recursion
// term_{j+1} = term_j (a+j) x / ((b+j)(j+1)). No argument transformation.
inline Complex kummer_series_direct(Complex a, Complex b, Complex x, const SeriesPolicy& policy) {
  using LComplex = std::complex<long double>;
  const LComplex la(a), lb(b), lx(x);

  if (is_nonpositive_integer(a)) {
    const auto degree = static_cast<std::size_t>(-a.real());
    if (is_nonpositive_integer(b) && static_cast<std::size_t>(-b.real()) < degree) {
      throw std::invalid_argument("kummer_1f1: pole of b^{(j)} before the polynomial terminates");
    }
    LComplex term = 1, sum = 1;
    for (std::size_t j = 0; j < degree; ++j) {
      const long double jj = static_cast<long double>(j);
      term *= (la + jj) * lx / ((lb + jj) * (jj + 1));
      sum += term;
    }
    return Complex(sum);
  }
  if (is_nonpositive_integer(b)) throw std::invalid_argument("kummer_1f1: b is a pole");

  LComplex term = 1, sum = 1;
  int small_in_a_row = 0;
  for (std::size_t j = 0; j < policy.max_terms; ++j) {
    const long double jj = static_cast<long double>(j);
    term *= (la + jj) * lx / ((lb + jj) * (jj + 1));
    sum += term;
    if (std::abs(term) <= static_cast<long double>(policy.relative_tolerance) * std::abs(sum)) {
      if (++small_in_a_row == 2) return Complex(sum);
    } else {
      small_in_a_row = 0;
    }
  }
  throw convergence_error("kummer_1f1: series did not converge within max_terms");
}

}  // namespace detail

/// L_n^{(alpha)}(x) = sum_{j=0}^{n} binom(n+alpha, n-j) (-x)^j / j!
inline double laguerre(std::size_t n, double alpha, double x) {
  double sum = 0.0;
  double power = 1.0;  // (-x)^j / j!
  for (std::size_t j = 0; j <= n; ++j) {
    if (j > 0) power *= -x / static_cast<double>(j);
    sum += generalized_binomial(Complex(static_cast<double>(n) + alpha), n - j).real() * power;
  }
  return sum;
}

/// Kummer's 1F1(a; b; x). A non-positive integer a = -N gives the exact
/// degree-N polynomial. Otherwise the series is summed until two consecutive
/// terms fall below relative_tolerance times the running sum; for Re(x) < -1
/// the Kummer transformation e^x 1F1(b-a; b; -x) is summed instead.
inline Complex kummer_1f1(Complex a, Complex b, Complex x, const SeriesPolicy& policy = {}) {
  policy.validate();
  Complex value;
  if (!detail::is_nonpositive_integer(a) && x.real() < -1.0) {
    value = std::exp(x) * detail::kummer_series_direct(b - a, b, -x, policy);
  } else {
    value = detail::kummer_series_direct(a, b, x, policy);
  }
  detail::require_finite(value, "kummer_1f1");
  return value;
}

namespace detail {

// Gamma(b) / (Gamma(a) Gamma(b-a)); factorials when all three are integers.
inline double euler_normalization(double a, double b) {
  if (is_positive_integer(a) && is_positive_integer(b) && is_positive_integer(b - a)) {
    auto fact = [](double v) { return factorial(static_cast<std::size_t>(v) - 1); };
    BigRational ratio(fact(b), fact(a) * fact(b - a));
    return static_cast<double>(ratio);
  }
  return std::tgamma(b) / (std::tgamma(a) * std::tgamma(b - a));
}

}  // namespace detail

/// 1F1(a; b; x) from Euler's integral
///   Gamma(b)/(Gamma(a)Gamma(b-a)) int_0^1 t^{a-1} (1-t)^{b-a-1} e^{tx} dt
/// by adaptive Gauss-Kronrod quadrature (abs + rel tolerance 1e-12).
inline double euler_integral_1f1(double a, double b, double x) {
  if (!(a > 0.0) || !(b - a > 0.0)) {
    throw std::invalid_argument("euler_integral_1f1: requires a > 0 and b > a");
  }
  constexpr double tolerance = 1e-12;
  auto integrand = [&](double s) {
    return std::pow(s, a - 1.0) * std::pow(1.0 - s, b - a - 1.0) * std::exp(s * x);
  };
  double error = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, 1.0, 20, tolerance, &error);
  if (!std::isfinite(integral) || error > tolerance * (1.0 + std::abs(integral))) {
    throw convergence_error("euler_integral_1f1: quadrature did not reach tolerance");
  }
  return detail::euler_normalization(a, b) * integral;
}

/// |1F1(a;b;x) - e^x 1F1(b-a;b;-x)| <= 1e-10 (1 + |1F1(a;b;x)|), both sides
/// summed directly (no internal transformation, which would make the check
/// circular).
inline bool kummer_transform_check(Complex a, Complex b, Complex x) {
  const SeriesPolicy policy;
  const Complex lhs = detail::kummer_series_direct(a, b, x, policy);
  const Complex rhs = std::exp(x) * detail::kummer_series_direct(b - a, b, -x, policy);
  return std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs));
}

/// int_0^1 t^n (1-t)^k dt = n! k! / (n+k+1)!
inline BigRational beta_integral_exact(std::size_t n, std::size_t k) {
  return BigRational(factorial(n) * factorial(k), factorial(n + k + 1));
}

}  // namespace freeprob
