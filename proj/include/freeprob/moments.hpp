#pragma once

// Moment engines for mu_{sc,2 sqrt(a)} [+] Unif_[b,c] and for nu_t.
//
// m_n(t) denotes the n-th moment of mu_{sc,2 sqrt t} [+] Unif_[-t,0]. It is a
// polynomial in t with exact rational coefficients, computed two independent
// ways: a closed Stirling-number formula and the ODE coefficient recursion.
// The second route never touches the Stirling table.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "freeprob/errors.hpp"
#include "freeprob/exactcomb.hpp"
#include "freeprob/rational_polynomial.hpp"
#include "freeprob/specfun.hpp"

namespace freeprob {

// ---------------------------------------------------------------------------
// Exact polynomial engines

/// m_n(t) = n! sum_{j=ceil(n/2)}^{n} t^j / (j!(1+j)!) s(1+j, n+1-j)
inline RationalPolynomial m_n_polynomial(std::size_t n) {
  auto table = shared_stirling_table(n + 1);
  const StirlingTable& s = *table;
  const BigInt n_factorial = factorial(n);
  std::vector<BigRational> coefficients(n + 1);
  for (std::size_t j = (n + 1) / 2; j <= n; ++j) {
    coefficients[j] = BigRational(n_factorial * s(1 + j, n + 1 - j), factorial(j) * factorial(j + 1));
  }
  return RationalPolynomial(std::move(coefficients));
}

/// Coefficients c(n,k) = [t^k] m_n(t) from the recursion
///   (n-k) c(n,k) = (n/2) sum_{l=0}^{k-1} sum_{j=1}^{n-k} c(j+l-1, l) c(n-l-j-1, k-1-l)
/// seeded with c(0,0)=1, c(n,0)=0 and c(n,n)=(-1)^n/(1+n).
inline std::vector<RationalPolynomial> moments_ode_oracle(std::size_t n_max) {
  std::vector<std::vector<BigRational>> c(n_max + 1);
  auto coef = [&c](std::size_t n, std::size_t k) -> const BigRational& {
    static const BigRational zero{0};
    return k <= n ? c[n][k] : zero;
  };

  for (std::size_t n = 0; n <= n_max; ++n) {
    c[n].assign(n + 1, BigRational(0));
    c[n][n] = make_rational(n % 2 == 0 ? 1 : -1, static_cast<long long>(n + 1));
    if (n == 0) continue;
    for (std::size_t k = 1; k + 1 <= n; ++k) {
      BigRational sum = 0;
      for (std::size_t l = 0; l < k; ++l) {
        for (std::size_t j = 1; j <= n - k; ++j) {
          const BigRational& left = coef(j + l - 1, l);
          if (left == 0) continue;
          sum += left * coef(n - l - j - 1, k - 1 - l);
        }
      }
      c[n][k] = sum * BigRational(BigInt(n), BigInt(2 * (n - k)));
    }
  }

  std::vector<RationalPolynomial> out;
  out.reserve(n_max + 1);
  for (auto& row : c) out.emplace_back(std::move(row));
  return out;
}

namespace detail {

inline BigRational pow(const BigRational& base, std::size_t exponent) {
  BigRational r = 1;
  for (std::size_t i = 0; i < exponent; ++i) r *= base;
  return r;  // 0^0 = 1
}

}  // namespace detail

/// n-th moment of mu_{sc,2 sqrt a} [+] Unif_[b,c]:
///   n! sum_k c^{n-k}/(n-k)! sum_{j=ceil(k/2)}^{k} (c-b)^{2j-k} a^{k-j} / (j!(1+j)!) s(1+j, k+1-j)
/// b == c gives mu_{sc,2 sqrt a} [+] delta_c.
inline BigRational moments_sc_unif_general(std::size_t n, const BigRational& a, const BigRational& b,
                                           const BigRational& c) {
  if (a <= 0) throw std::invalid_argument("moments_sc_unif_general: a must be positive");
  if (b > c) throw std::invalid_argument("moments_sc_unif_general: need b <= c");
  auto table = shared_stirling_table(n + 1);
  const StirlingTable& s = *table;
  const BigRational width = c - b;

  BigRational total = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    BigRational inner = 0;
    for (std::size_t j = (k + 1) / 2; j <= k; ++j) {
      const BigInt& stirling = s(1 + j, k + 1 - j);
      if (stirling == 0) continue;
      inner += detail::pow(width, 2 * j - k) * detail::pow(a, k - j) *
               BigRational(stirling, factorial(j) * factorial(j + 1));
    }
    total += detail::pow(c, n - k) * inner / BigRational(factorial(n - k));
  }
  return total * BigRational(factorial(n));
}

// ---------------------------------------------------------------------------
// nu_t: integer and fractional moments

/// e^{nt/2} (1/n) L_{n-1}^{(1)}(-nt)
inline double moments_nu_laguerre(std::size_t n, double t) {
  if (n < 1) throw std::invalid_argument("moments_nu_laguerre: n >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("moments_nu_laguerre: t > 0");
  const double nd = static_cast<double>(n);
  return std::exp(nd * t / 2.0) * laguerre(n - 1, 1.0, -nd * t) / nd;
}

/// e^{nt/2} (1/n) sum_{j=0}^{n-1} binom(n, 1+j) (nt)^j / j!
inline double moments_nu_binomial_sum(std::size_t n, double t) {
  if (n < 1) throw std::invalid_argument("moments_nu_binomial_sum: n >= 1");
  const double nd = static_cast<double>(n);
  double sum = 0.0, power = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) power *= nd * t / static_cast<double>(j);
    sum += static_cast<double>(binomial(n, j + 1)) * power;
  }
  return std::exp(nd * t / 2.0) * sum / nd;
}

/// e^{alpha t/2} (1/alpha) sum_j binom(alpha, 1+j) (alpha t)^j / j!, with the
/// generalized binomial built as a product (not the 1F1 term recursion).
inline Complex fractional_moment_nu_series(Complex alpha, double t, std::size_t max_terms = 10'000) {
  if (alpha == Complex(0.0)) throw std::invalid_argument("fractional_moment_nu: alpha != 0");
  if (!(t > 0.0)) throw std::invalid_argument("fractional_moment_nu: t > 0");
  using LComplex = std::complex<long double>;
  const LComplex x = LComplex(alpha) * static_cast<long double>(t);
  LComplex sum = 0, power = 1;  // power = x^j / j!
  LComplex binom = LComplex(alpha);  // binom(alpha, 1+j)
  int small_in_a_row = 0;
  for (std::size_t j = 0; j < max_terms; ++j) {
    if (j > 0) {
      power *= x / static_cast<long double>(j);
      binom *= (LComplex(alpha) - static_cast<long double>(j)) / static_cast<long double>(j + 1);
    }
    const LComplex term = binom * power;
    sum += term;
    if (static_cast<long double>(j) > std::abs(x) && std::abs(term) <= 1e-18L * std::abs(sum)) {
      if (++small_in_a_row == 2) {
        return std::exp(alpha * t / 2.0) * Complex(sum / LComplex(alpha));
      }
    } else {
      small_in_a_row = 0;
    }
  }
  throw convergence_error("fractional_moment_nu_series: series did not converge");
}

inline constexpr double kFractionalAgreement = 1e-10;

/// int x^alpha d nu_t = e^{alpha t/2} 1F1(1-alpha; 2; -alpha t). The binomial
/// series form is evaluated as well; disagreement beyond 1e-10 relative throws.
inline Complex fractional_moment_nu(Complex alpha, double t) {
  if (alpha == Complex(0.0)) throw std::invalid_argument("fractional_moment_nu: alpha != 0");
  if (!(t > 0.0)) throw std::invalid_argument("fractional_moment_nu: t > 0");
  const Complex value = std::exp(alpha * t / 2.0) * kummer_1f1(1.0 - alpha, 2.0, -alpha * t);
  const Complex series = fractional_moment_nu_series(alpha, t);
  if (std::abs(value - series) > kFractionalAgreement * std::abs(value)) {
    throw numerical_error("fractional_moment_nu: 1F1 and binomial-series forms disagree");
  }
  return value;
}

/// int e^{alpha x} d(mu_{sc,2 sqrt t} [+] Unif_[-t,0]) = 1F1(1-alpha; 2; -alpha t)
inline Complex exp_mgf_additive(Complex alpha, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("exp_mgf_additive: t > 0");
  if (alpha == Complex(0.0)) return 1.0;
  return kummer_1f1(1.0 - alpha, 2.0, -alpha * t);
}

struct MomentSeriesEstimate {
  Complex value;
  double remainder_estimate = 0.0;  // magnitude of the last included term
};

/// sum_{k=0}^{k_max} alpha^k m_k(t) / k! with exact m_k(t) at the binary value of t.
inline MomentSeriesEstimate exp_mgf_moment_series(Complex alpha, double t, std::size_t k_max = 40) {
  MomentSeriesEstimate out;
  const BigRational exact_t(t);
  Complex power = 1.0;  // alpha^k / k!
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (k > 0) power *= alpha / static_cast<double>(k);
    const Complex term = power * static_cast<double>(m_n_polynomial(k)(exact_t));
    out.value += term;
    out.remainder_estimate = std::abs(term);
  }
  return out;
}

struct TheoremMainEntry {
  std::size_t n = 0;
  double pushforward = 0.0;  // e^{nt/2} 1F1(1-n; 2; -nt)
  double laguerre = 0.0;     // e^{nt/2} (1/n) L_{n-1}^{(1)}(-nt)
  double relative_deviation = 0.0;
  bool pass = false;
};

struct TheoremMainReport {
  double t = 0.0;
  double tolerance = 1e-10;
  std::vector<TheoremMainEntry> entries;
  double max_relative_deviation = 0.0;
  bool all_pass = true;
};

/// Moment-level check that exp(mu_{sc,2 sqrt t} [+] Unif_[-t/2,t/2]) and nu_t
/// agree: e^{nt/2} 1F1(1-n;2;-nt) vs the Laguerre moments, 1 <= n <= n_max.
inline TheoremMainReport verify_theorem_main_moments(std::size_t n_max, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("verify_theorem_main_moments: t > 0");
  TheoremMainReport report;
  report.t = t;
  for (std::size_t n = 1; n <= n_max; ++n) {
    TheoremMainEntry e;
    e.n = n;
    const double nd = static_cast<double>(n);
    e.pushforward = std::exp(nd * t / 2.0) * exp_mgf_additive(nd, t).real();
    e.laguerre = moments_nu_laguerre(n, t);
    const double diff = std::abs(e.pushforward - e.laguerre);
    e.relative_deviation = diff / std::max(std::abs(e.laguerre), 1e-300);
    e.pass = diff <= report.tolerance * (1.0 + std::abs(e.laguerre)) &&
             e.relative_deviation <= report.tolerance;
    report.max_relative_deviation = std::max(report.max_relative_deviation, e.relative_deviation);
    report.all_pass = report.all_pass && e.pass;
    report.entries.push_back(e);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Symbolic measures

class MeasureSpec {
 public:
  enum class Kind { semicircle, uniform, dirac, boxplus, scaled, exp_pushforward, nu };

  /// Semicircle with variance a, i.e. radius 2 sqrt(a).
  static MeasureSpec semicircle_with_variance(BigRational a) {
    if (a <= 0) throw std::invalid_argument("semicircle: variance must be positive");
    MeasureSpec m(Kind::semicircle);
    m.first_ = std::move(a);
    return m;
  }
  static MeasureSpec uniform(BigRational b, BigRational c) {
    if (b > c) throw std::invalid_argument("uniform: need b <= c");
    MeasureSpec m(Kind::uniform);
    m.first_ = std::move(b);
    m.second_ = std::move(c);
    return m;
  }
  static MeasureSpec dirac(BigRational c) {
    MeasureSpec m(Kind::dirac);
    m.first_ = std::move(c);
    return m;
  }
  static MeasureSpec boxplus(std::vector<MeasureSpec> parts) {
    if (parts.empty()) throw std::invalid_argument("boxplus: list must be nonempty");
    MeasureSpec m(Kind::boxplus);
    m.children_ = std::move(parts);
    return m;
  }
  static MeasureSpec scaled(BigRational gamma, MeasureSpec inner) {
    if (gamma == 0) throw std::invalid_argument("scaled: factor must be nonzero");
    MeasureSpec m(Kind::scaled);
    m.first_ = std::move(gamma);
    m.children_.push_back(std::move(inner));
    return m;
  }
  static MeasureSpec exp_pushforward(MeasureSpec inner) {
    MeasureSpec m(Kind::exp_pushforward);
    m.children_.push_back(std::move(inner));
    return m;
  }
  static MeasureSpec nu(BigRational t) {
    if (t <= 0) throw std::invalid_argument("nu: t must be positive");
    MeasureSpec m(Kind::nu);
    m.first_ = std::move(t);
    return m;
  }

  Kind kind() const { return kind_; }
  const BigRational& variance() const { return first_; }
  double radius() const { return 2.0 * std::sqrt(static_cast<double>(first_)); }
  const BigRational& lower() const { return first_; }
  const BigRational& upper() const { return kind_ == Kind::dirac ? first_ : second_; }
  const BigRational& factor() const { return first_; }
  const BigRational& time() const { return first_; }
  const std::vector<MeasureSpec>& children() const { return children_; }

 private:
  explicit MeasureSpec(Kind kind) : kind_(kind) {}

  Kind kind_;
  BigRational first_;
  BigRational second_;
  std::vector<MeasureSpec> children_;
};

/// mu_{sc,2 sqrt a} [+] Unif_[b,c]; a = 0 means no semicircle part, b = c a point mass.
struct ScUnifParameters {
  BigRational a = 0;
  BigRational b = 0;
  BigRational c = 0;
};

/// Reduces a measure built from semicircles, at most one non-degenerate
/// uniform, point masses, boxplus and scaling to ScUnifParameters.
inline ScUnifParameters resolve_sc_unif(const MeasureSpec& spec) {
  using Kind = MeasureSpec::Kind;
  switch (spec.kind()) {
    case Kind::semicircle:
      return {spec.variance(), 0, 0};
    case Kind::uniform:
      return {0, spec.lower(), spec.upper()};
    case Kind::dirac:
      return {0, spec.lower(), spec.lower()};
    case Kind::scaled: {
      ScUnifParameters p = resolve_sc_unif(spec.children().front());
      const BigRational& g = spec.factor();
      BigRational lo = g * p.b, hi = g * p.c;
      if (lo > hi) std::swap(lo, hi);
      return {g * g * p.a, lo, hi};
    }
    case Kind::boxplus: {
      ScUnifParameters sum;
      bool have_interval = false;
      for (const auto& child : spec.children()) {
        ScUnifParameters p = resolve_sc_unif(child);
        if (p.b != p.c) {
          if (have_interval) {
            throw std::invalid_argument("boxplus of two non-degenerate uniforms is not supported");
          }
          have_interval = true;
        }
        sum.a += p.a;
        sum.b += p.b;
        sum.c += p.c;
      }
      return sum;
    }
    case Kind::exp_pushforward:
    case Kind::nu:
      break;
  }
  throw std::invalid_argument("measure is not a free convolution of semicircle, uniform and point masses");
}

/// Exact n-th moment for measures that resolve to ScUnifParameters.
inline BigRational moment_exact(const MeasureSpec& spec, std::size_t n) {
  const ScUnifParameters p = resolve_sc_unif(spec);
  if (p.a > 0) return moments_sc_unif_general(n, p.a, p.b, p.c);
  if (p.b == p.c) return detail::pow(p.c, n);
  return (detail::pow(p.c, n + 1) - detail::pow(p.b, n + 1)) /
         (BigRational(BigInt(n + 1)) * (p.c - p.b));
}

namespace detail {

// int e^{alpha x} d(mu_{sc,2 sqrt a} [+] Unif_[b,c])
inline Complex sc_unif_mgf(const ScUnifParameters& p, Complex alpha) {
  if (alpha == Complex(0.0)) return 1.0;
  const double a = static_cast<double>(p.a);
  const double b = static_cast<double>(p.b);
  const double c = static_cast<double>(p.c);
  const Complex shift = std::exp(alpha * c);
  if (p.a == 0) {
    if (p.b == p.c) return shift;
    return (shift - std::exp(alpha * b)) / (alpha * (c - b));
  }
  if (p.b == p.c) {
    // semicircle: sum_k a^k alpha^{2k} / (k!(k+1)!)
    const Complex x = alpha * alpha * a;
    Complex term = 1.0, sum = 1.0;
    for (std::size_t k = 1; k < 10'000; ++k) {
      term *= x / (static_cast<double>(k) * static_cast<double>(k + 1));
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum) && static_cast<double>(k) > std::sqrt(std::abs(x))) {
        return shift * sum;
      }
    }
    throw convergence_error("semicircle mgf: series did not converge");
  }
  const double width = c - b;
  return shift * kummer_1f1(1.0 - alpha * a / width, 2.0, -alpha * width);
}

}  // namespace detail

/// Moment of order alpha (complex). Integer orders of additive measures go
/// through the exact engine; complex orders are allowed only for nu_t and
/// exp-pushforwards (and positive scalings of those).
inline Complex moment_numeric(const MeasureSpec& spec, Complex order) {
  using Kind = MeasureSpec::Kind;
  switch (spec.kind()) {
    case Kind::nu:
      if (order == Complex(0.0)) return 1.0;
      return fractional_moment_nu(order, static_cast<double>(spec.time()));
    case Kind::exp_pushforward:
      return detail::sc_unif_mgf(resolve_sc_unif(spec.children().front()), order);
    case Kind::scaled: {
      const MeasureSpec& inner = spec.children().front();
      if (inner.kind() == Kind::nu || inner.kind() == Kind::exp_pushforward) {
        if (spec.factor() <= 0) throw std::invalid_argument("complex moments need a positive scaling factor");
        return std::pow(Complex(static_cast<double>(spec.factor())), order) * moment_numeric(inner, order);
      }
      break;
    }
    default:
      break;
  }
  if (order.imag() != 0.0 || order.real() < 0.0 || order.real() != std::round(order.real())) {
    throw std::invalid_argument("complex exponents are only allowed for nu(t) and exp-pushforward measures");
  }
  return static_cast<double>(moment_exact(spec, static_cast<std::size_t>(order.real())));
}

struct MomentQuery {
  enum class Evaluation { exact_polynomial, numeric };

  MeasureSpec measure;
  std::variant<std::size_t, Complex> order;
  Evaluation evaluation = Evaluation::exact_polynomial;

  void validate() const {
    using Kind = MeasureSpec::Kind;
    if (std::holds_alternative<Complex>(order)) {
      const MeasureSpec* m = &measure;
      if (m->kind() == Kind::scaled) m = &m->children().front();
      if (m->kind() != Kind::nu && m->kind() != Kind::exp_pushforward) {
        throw std::invalid_argument("MomentQuery: complex exponent requires nu or exp_pushforward");
      }
      if (evaluation == Evaluation::exact_polynomial) {
        throw std::invalid_argument("MomentQuery: complex exponents are numeric only");
      }
    }
  }
};

using MomentValue = std::variant<BigRational, Complex>;

inline MomentValue evaluate(const MomentQuery& query) {
  query.validate();
  if (query.evaluation == MomentQuery::Evaluation::exact_polynomial) {
    return moment_exact(query.measure, std::get<std::size_t>(query.order));
  }
  const Complex order = std::holds_alternative<Complex>(query.order)
                            ? std::get<Complex>(query.order)
                            : Complex(static_cast<double>(std::get<std::size_t>(query.order)));
  return moment_numeric(query.measure, order);
}

}  // namespace freeprob
