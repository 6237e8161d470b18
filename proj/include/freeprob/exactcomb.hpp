#pragma once

// Exact combinatorics: signed Stirling numbers of the first kind, factorials,
// binomials, and exact checks of the Stirling double-sum identity.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "freeprob/errors.hpp"

namespace freeprob {

using BigInt = boost::multiprecision::cpp_int;
/// Always in lowest terms with a positive denominator (maintained by Boost).
using BigRational = boost::multiprecision::cpp_rational;

inline BigRational make_rational(long long num, long long den = 1) {
  return BigRational(BigInt(num), BigInt(den));
}

/// Triangular table of s(n,k), 0 <= k <= n <= max_n, standard signed
/// convention: x(x-1)...(x-n+1) = sum_k s(n,k) x^k. Immutable after
/// construction, so it can be shared across threads.
class StirlingTable {
 public:
  explicit StirlingTable(std::size_t max_n) : max_n_(max_n) {
    entries_.resize((max_n + 1) * (max_n + 2) / 2);
    at(0, 0) = 1;
    for (std::size_t n = 0; n < max_n; ++n) {
      for (std::size_t k = 1; k <= n + 1; ++k) {
        // s(n+1,k) = s(n,k-1) - n s(n,k)
        BigInt next = get(n, k - 1);
        if (k <= n) next -= BigInt(n) * get(n, k);
        at(n + 1, k) = std::move(next);
      }
    }
  }

  std::size_t max_n() const { return max_n_; }

  /// s(n,k); zero when k > n. Throws std::out_of_range when n > max_n().
  const BigInt& operator()(std::size_t n, std::size_t k) const {
    if (n > max_n_) throw std::out_of_range("StirlingTable: n exceeds max_n");
    return get(n, k);
  }

 private:
  static std::size_t offset(std::size_t n, std::size_t k) { return n * (n + 1) / 2 + k; }

  const BigInt& get(std::size_t n, std::size_t k) const {
    static const BigInt zero{0};
    return k > n ? zero : entries_[offset(n, k)];
  }
  BigInt& at(std::size_t n, std::size_t k) { return entries_[offset(n, k)]; }

  std::size_t max_n_;
  std::vector<BigInt> entries_;
};

/// Process-wide memoized table covering at least max_n. The returned table is
/// immutable; a larger request replaces the cached pointer but never mutates a
/// table another thread may be reading.
inline std::shared_ptr<const StirlingTable> shared_stirling_table(std::size_t max_n) {
  static std::mutex mutex;
  static std::shared_ptr<const StirlingTable> cached;
  std::lock_guard lock(mutex);
  if (!cached || cached->max_n() < max_n) {
    std::size_t size = std::max<std::size_t>(max_n, cached ? 2 * cached->max_n() : 64);
    cached = std::make_shared<const StirlingTable>(size);
  }
  return cached;
}

inline BigInt stirling_first(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  return (*shared_stirling_table(n))(n, k);
}

inline BigInt factorial(std::size_t n) {
  BigInt r = 1;
  for (std::size_t i = 2; i <= n; ++i) r *= i;
  return r;
}

/// x^{(n)} = x (x+1) ... (x+n-1); works for BigRational, BigInt, double and
/// std::complex<double>.
template <class T>
T rising_factorial(const T& x, std::size_t n) {
  T r{1};
  for (std::size_t i = 0; i < n; ++i) r *= x + T(static_cast<long long>(i));
  return r;
}

template <class T>
std::complex<T> rising_factorial(const std::complex<T>& x, std::size_t n) {
  std::complex<T> r{1};
  for (std::size_t i = 0; i < n; ++i) r *= x + static_cast<T>(i);
  return r;
}

inline BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;  // exact: r is binom(n-k+i, i) after this step
  }
  return r;
}

/// alpha (alpha-1) ... (alpha-k+1) / k!
inline std::complex<double> generalized_binomial(std::complex<double> alpha, std::size_t k) {
  std::complex<double> r{1.0};
  for (std::size_t i = 0; i < k; ++i) {
    r *= (alpha - static_cast<double>(i)) / static_cast<double>(i + 1);
  }
  return r;
}

inline constexpr std::size_t kLogSeriesCap = 256;

/// s(n,k) = (n!/k!) [z^n] log^k(1+z), by truncated formal power series
/// arithmetic over exact rationals. Independent of StirlingTable.
inline BigRational stirling_via_log_series(std::size_t n, std::size_t k,
                                           std::size_t cap = kLogSeriesCap) {
  if (n > cap) throw std::out_of_range("stirling_via_log_series: n exceeds cap");
  if (k > n) return 0;

  std::vector<BigRational> log1p(n + 1);
  for (std::size_t m = 1; m <= n; ++m) {
    log1p[m] = make_rational(m % 2 == 1 ? 1 : -1, static_cast<long long>(m));
  }

  std::vector<BigRational> power(n + 1);
  power[0] = 1;
  for (std::size_t p = 0; p < k; ++p) {
    std::vector<BigRational> next(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      if (power[i] == 0) continue;
      for (std::size_t j = 1; i + j <= n; ++j) next[i + j] += power[i] * log1p[j];
    }
    power = std::move(next);
  }
  return power[n] * BigRational(factorial(n), factorial(k));
}

struct StirlingIdentityResult {
  bool holds = false;
  BigRational lhs;
  BigRational rhs;
};

/// Checks 2l s(1+m,1+l) against
///   (m+1)/(l+m-1) sum_{n=1}^{l} sum_{k=0}^{m-1}
///     binom(l+m-2, n+k-1)^{-1} binom(m,k) binom(m,1+k) s(1+k,n) s(m-k,l+1-n)
/// in exact arithmetic.
inline StirlingIdentityResult verify_stirling_identity(std::size_t l, std::size_t m) {
  if (l < 1 || m < 1) throw std::invalid_argument("verify_stirling_identity: l, m >= 1");
  auto table = shared_stirling_table(std::max(l, m) + 1);
  const StirlingTable& s = *table;

  StirlingIdentityResult result;
  result.lhs = BigRational(BigInt(2 * l) * s(1 + m, 1 + l));

  BigRational sum = 0;
  for (std::size_t n = 1; n <= l; ++n) {
    for (std::size_t k = 0; k + 1 <= m; ++k) {
      const BigInt& s1 = s(1 + k, n);
      const BigInt& s2 = s(m - k, l + 1 - n);
      // Vanishing Stirling factors are skipped before the binomial is inverted.
      if (s1 == 0 || s2 == 0) continue;
      BigInt inverted = binomial(l + m - 2, n + k - 1);
      if (inverted == 0) {
        throw numerical_error("verify_stirling_identity: nonzero term meets a zero binomial at l=" +
                              std::to_string(l) + " m=" + std::to_string(m));
      }
      sum += BigRational(binomial(m, k) * binomial(m, 1 + k) * s1 * s2, inverted);
    }
  }
  result.rhs = sum * BigRational(BigInt(m + 1), BigInt(l + m - 1));
  result.holds = result.lhs == result.rhs;
  return result;
}

/// sum_{n=0}^{k} (-1)^n binom(N,n) == (-1)^k binom(N-1,k)
inline bool alternating_binomial_sum_check(std::size_t N, std::size_t k) {
  if (N < 1 || k > N) throw std::invalid_argument("alternating_binomial_sum_check: need 1 <= N, k <= N");
  BigInt lhs = 0;
  for (std::size_t n = 0; n <= k; ++n) {
    if (n % 2 == 0) lhs += binomial(N, n);
    else lhs -= binomial(N, n);
  }
  BigInt rhs = binomial(N - 1, k);
  if (k % 2 == 1) rhs = -rhs;
  return lhs == rhs;
}

inline std::string to_string(const BigRational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "p", "p/q", or a finite decimal such as "-0.25".
namespace detail {

// cpp_int reads a leading 0 as an octal prefix; strip it.
inline BigInt parse_decimal_integer(std::string text) {
  std::string sign;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    if (text[0] == '-') sign = "-";
    text.erase(0, 1);
  }
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("not an integer");
  }
  const auto first = text.find_first_not_of('0');
  return BigInt(sign + (first == std::string::npos ? std::string("0") : text.substr(first)));
}

}  // namespace detail

/// Accepts "p", "p/q" and finite decimals such as "-0.25".
inline BigRational parse_rational(const std::string& text) {
  auto fail = [&]() -> BigRational { throw std::invalid_argument("not a rational: '" + text + "'"); };
  try {
    if (auto slash = text.find('/'); slash != std::string::npos) {
      const BigInt den = detail::parse_decimal_integer(text.substr(slash + 1));
      if (den == 0) return fail();
      return BigRational(detail::parse_decimal_integer(text.substr(0, slash)), den);
    }
    if (auto dot = text.find('.'); dot != std::string::npos) {
      const std::string fraction = text.substr(dot + 1);
      std::string whole = text.substr(0, dot);
      const bool bare_sign = whole.empty() || whole == "-" || whole == "+";
      if (bare_sign && fraction.empty()) return fail();
      if (bare_sign) whole += "0";
      BigInt scale = 1;
      for (std::size_t i = 0; i < fraction.size(); ++i) scale *= 10;
      return BigRational(detail::parse_decimal_integer(whole + fraction), scale);
    }
    return BigRational(detail::parse_decimal_integer(text));
  } catch (const std::exception&) {
    return fail();
  }
}

}  // namespace freeprob
