#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "freeprob/exactcomb.hpp"

namespace freeprob {

/// Polynomial in one variable with exact rational coefficients; index = power.
/// Trailing zeros are always trimmed.
class RationalPolynomial {
 public:
  static constexpr long kZeroDegree = std::numeric_limits<long>::min();

  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<BigRational> coefficients)
      : coefficients_(std::move(coefficients)) {
    trim();
  }

  static RationalPolynomial constant(BigRational c) { return RationalPolynomial({std::move(c)}); }

  static RationalPolynomial monomial(BigRational c, std::size_t power) {
    std::vector<BigRational> coefficients(power + 1);
    coefficients[power] = std::move(c);
    return RationalPolynomial(std::move(coefficients));
  }

  bool is_zero() const { return coefficients_.empty(); }

  /// kZeroDegree stands in for -infinity on the zero polynomial.
  long degree() const { return is_zero() ? kZeroDegree : static_cast<long>(coefficients_.size()) - 1; }

  const BigRational& coefficient(std::size_t power) const {
    static const BigRational zero{0};
    return power < coefficients_.size() ? coefficients_[power] : zero;
  }

  std::span<const BigRational> coefficients() const { return coefficients_; }

  BigRational operator()(const BigRational& t) const {
    BigRational acc = 0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  /// Evaluates exactly at the binary value of t and rounds once at the end.
  double evaluate(double t) const { return static_cast<double>((*this)(BigRational(t))); }

  RationalPolynomial& operator+=(const RationalPolynomial& other) {
    if (other.coefficients_.size() > coefficients_.size()) coefficients_.resize(other.coefficients_.size());
    for (std::size_t i = 0; i < other.coefficients_.size(); ++i) coefficients_[i] += other.coefficients_[i];
    trim();
    return *this;
  }

  RationalPolynomial& operator-=(const RationalPolynomial& other) {
    if (other.coefficients_.size() > coefficients_.size()) coefficients_.resize(other.coefficients_.size());
    for (std::size_t i = 0; i < other.coefficients_.size(); ++i) coefficients_[i] -= other.coefficients_[i];
    trim();
    return *this;
  }

  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }

  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigRational> out(a.coefficients_.size() + b.coefficients_.size() - 1);
    for (std::size_t i = 0; i < a.coefficients_.size(); ++i) {
      if (a.coefficients_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coefficients_.size(); ++j) out[i + j] += a.coefficients_[i] * b.coefficients_[j];
    }
    return RationalPolynomial(std::move(out));
  }

  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

  /// "t + 1/3 t^2", "-1/2 t", "1", "0".
  std::string to_string(const std::string& variable = "t") const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t k = 0; k < coefficients_.size(); ++k) {
      const BigRational& c = coefficients_[k];
      if (c == 0) continue;
      const bool negative = c < 0;
      const BigRational magnitude = negative ? BigRational(-c) : c;
      if (first) {
        if (negative) out << "-";
      } else {
        out << (negative ? " - " : " + ");
      }
      first = false;
      if (k == 0) {
        out << freeprob::to_string(magnitude);
        continue;
      }
      if (magnitude != 1) out << freeprob::to_string(magnitude) << " ";
      out << variable;
      if (k > 1) out << "^" << k;
    }
    return out.str();
  }

 private:
  void trim() {
    while (!coefficients_.empty() && coefficients_.back() == 0) coefficients_.pop_back();
  }

  std::vector<BigRational> coefficients_;
};

}  // namespace freeprob
