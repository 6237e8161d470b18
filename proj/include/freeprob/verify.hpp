#pragma once

// Named invariant suites run by `freeprob verify`. Each returns a pass flag
// and a one-line summary; none of them throws on a failed check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "freeprob/exactcomb.hpp"
#include "freeprob/freeconv.hpp"
#include "freeprob/moments.hpp"
#include "freeprob/rng.hpp"
#include "freeprob/specfun.hpp"

namespace freeprob {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string summary;
  double metric = 0.0;  // suite-specific worst deviation (0 for exact suites)
};

inline SuiteResult verify_stirling_suite(std::size_t l_max, std::size_t m_max) {
  SuiteResult r{"stirling", true, "", 0.0};
  std::size_t checked = 0, failed = 0;
  for (std::size_t l = 1; l <= l_max; ++l) {
    for (std::size_t m = 1; m <= m_max; ++m) {
      ++checked;
      if (!verify_stirling_identity(l, m).holds) ++failed;
    }
  }
  r.pass = failed == 0;
  r.summary = std::to_string(checked) + " (l,m) pairs, " + std::to_string(failed) + " failures (exact)";
  return r;
}

/// Closed Stirling formula vs the ODE recursion, plus degree / leading
/// coefficient / vanishing below n/2.
inline SuiteResult verify_oracle_suite(std::size_t n_max) {
  SuiteResult r{"oracle", true, "", 0.0};
  const auto oracle = moments_ode_oracle(n_max);
  std::size_t failed = 0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const RationalPolynomial p = m_n_polynomial(n);
    bool ok = p == oracle[n];
    ok = ok && p.degree() == static_cast<long>(n);
    ok = ok && p.coefficient(n) == make_rational(n % 2 == 0 ? 1 : -1, static_cast<long long>(n + 1));
    for (std::size_t k = 0; k < (n + 1) / 2; ++k) ok = ok && p.coefficient(k) == 0;
    if (!ok) ++failed;
  }
  r.pass = failed == 0;
  r.summary = "n <= " + std::to_string(n_max) + ", " + std::to_string(failed) + " mismatches (exact)";
  return r;
}

/// Deterministic 50-point sample of (a, b, x) with bounded parameters.
struct KummerSamplePoint {
  Complex a, b, x;
};

inline std::vector<KummerSamplePoint> kummer_sample(std::size_t count, std::uint64_t seed) {
  Xoshiro256 rng(seed, 0xC0FFEE);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform_open(); };
  std::vector<KummerSamplePoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({Complex(uniform(-3, 3), uniform(-1, 1)), Complex(uniform(0.5, 4), uniform(-0.5, 0.5)),
                   Complex(uniform(-5, 5), uniform(-3, 3))});
  }
  return out;
}

/// Auxiliary identities: log-series Stirling extraction, Kummer's
/// transformation, Euler's integral, alternating binomial sums, the
/// Laguerre/1F1 link and the beta integral.
inline SuiteResult verify_kummer_suite(std::uint64_t seed = 2024) {
  SuiteResult r{"kummer", true, "", 0.0};
  std::ostringstream summary;

  bool log_series = true;
  for (std::size_t n = 0; n <= 20; ++n) {
    for (std::size_t k = 0; k <= n; ++k) log_series = log_series && stirling_via_log_series(n, k) == stirling_first(n, k);
  }
  summary << "log-series " << (log_series ? "ok" : "FAIL");

  bool transform = true;
  for (const auto& p : kummer_sample(50, seed)) transform = transform && kummer_transform_check(p.a, p.b, p.x);
  summary << ", kummer-transform " << (transform ? "ok" : "FAIL");

  bool euler = true;
  double worst = 0.0;
  const std::pair<double, double> params[] = {{1, 2}, {2, 3}, {1, 3}, {2, 5}};
  for (auto [a, b] : params) {
    for (int i = 0; i <= 20; ++i) {
      const double x = -5.0 + 0.5 * i;
      const double series = kummer_1f1(a, b, x).real();
      const double rel = std::abs(euler_integral_1f1(a, b, x) - series) / std::abs(series);
      worst = std::max(worst, rel);
      euler = euler && rel <= 1e-10;
    }
  }
  summary << ", euler-integral " << (euler ? "ok" : "FAIL");

  bool alternating = true;
  for (std::size_t N = 1; N <= 30; ++N) {
    for (std::size_t k = 0; k <= N; ++k) alternating = alternating && alternating_binomial_sum_check(N, k);
  }
  summary << ", alternating-binomial " << (alternating ? "ok" : "FAIL");

  bool link = true;
  for (std::size_t n = 1; n <= 15; ++n) {
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
      const double nd = static_cast<double>(n);
      const double lhs = laguerre(n - 1, 1.0, -nd * t) / nd;
      const double rhs = kummer_1f1(1.0 - nd, 2.0, -nd * t).real();
      link = link && std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs);
    }
  }
  summary << ", laguerre-link " << (link ? "ok" : "FAIL");

  bool beta = true;
  for (std::size_t n = 0; n <= 20; ++n) {
    for (std::size_t k = 0; k <= 20; ++k) {
      beta = beta && beta_integral_exact(n, k) * BigRational(BigInt(n + k + 1) * binomial(n + k, n)) == 1;
    }
  }
  summary << ", beta " << (beta ? "ok" : "FAIL");

  r.pass = log_series && transform && euler && alternating && link && beta;
  r.metric = worst;
  r.summary = summary.str();
  return r;
}

inline SuiteResult verify_theorem_main_suite(std::size_t n_max, const std::vector<double>& times) {
  SuiteResult r{"theorem-main", true, "", 0.0};
  std::ostringstream summary;
  summary << "n <= " << n_max << ", t in {";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto report = verify_theorem_main_moments(n_max, times[i]);
    r.pass = r.pass && report.all_pass;
    r.metric = std::max(r.metric, report.max_relative_deviation);
    summary << (i ? ", " : "") << times[i];
  }
  summary << "}, max rel dev " << r.metric;
  r.summary = summary.str();
  return r;
}

/// 1F1 form vs binomial-series form of the fractional moments of nu_t for
/// random complex alpha with |alpha| <= 5.
inline SuiteResult verify_fractional_suite(std::size_t count = 40, std::uint64_t seed = 7) {
  SuiteResult r{"fractional", true, "", 0.0};
  Xoshiro256 rng(seed, 0xF00D);
  std::size_t failed = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double radius = 5.0 * std::sqrt(rng.uniform_open());
    const double angle = 2.0 * std::numbers::pi * rng.uniform_open();
    const Complex alpha = std::polar(radius, angle);
    for (double t : {0.5, 2.0}) {
      const Complex via_1f1 = std::exp(alpha * t / 2.0) * kummer_1f1(1.0 - alpha, 2.0, -alpha * t);
      const Complex via_series = fractional_moment_nu_series(alpha, t);
      const double rel = std::abs(via_1f1 - via_series) / std::abs(via_series);
      r.metric = std::max(r.metric, rel);
      if (rel > kFractionalAgreement) ++failed;
    }
  }
  r.pass = failed == 0;
  std::ostringstream summary;
  summary << count << " alphas x 2 times, max rel diff " << r.metric << ", " << failed << " failures";
  r.summary = summary.str();
  return r;
}

struct DensityMomentCheck {
  double t = 0.0;
  std::size_t order = 0;
  double grid = 0.0;
  double exact = 0.0;
  double relative_error = 0.0;
};

/// Grid for mu_{sc,2 sqrt t} [+] Unif_[b,c] covering the support with a 3 eta margin.
inline DensityGrid covering_density_grid(double t, double b, double c, std::size_t points, double eta) {
  const double R = 2.0 * std::sqrt(t);
  const SupportInterval support = boxplus_support(R, b, c);
  return density_grid(R, b, c, support.lower - 3.0 * eta, support.upper + 3.0 * eta, points, eta);
}

/// Moments of the normalized grid density of mu_{sc,2 sqrt t} [+] Unif_[-t,0]
/// against m_n(t), n <= n_max. Dividing by the grid mass removes the Cauchy-tail
/// mass that falls outside the window (about eta/width).
inline std::vector<DensityMomentCheck> density_moment_checks(const std::vector<double>& times, std::size_t n_max,
                                                             std::size_t points, double eta) {
  std::vector<DensityMomentCheck> out;
  for (double t : times) {
    const DensityGrid grid = covering_density_grid(t, -t, 0.0, points, eta);
    for (std::size_t n = 0; n <= n_max; ++n) {
      DensityMomentCheck c;
      c.t = t;
      c.order = n;
      c.grid = grid_moment(grid, n) / grid.mass_estimate;
      c.exact = m_n_polynomial(n).evaluate(t);
      c.relative_error = std::abs(c.grid - c.exact) / std::abs(c.exact);
      out.push_back(c);
    }
  }
  return out;
}

inline SuiteResult verify_density_suite(std::size_t points = 4000, double eta = 1e-3) {
  SuiteResult r{"density", true, "", 0.0};
  for (const auto& c : density_moment_checks({0.25, 1.0, 4.0}, 8, points, eta)) {
    r.metric = std::max(r.metric, c.relative_error);
  }
  r.pass = r.metric <= 1e-3;
  std::ostringstream summary;
  summary << "grid moments n <= 8, t in {0.25, 1, 4}, max rel err " << r.metric << " (tol 1e-3)";
  r.summary = summary.str();
  return r;
}

struct SupportComparison {
  SupportInterval detected;     // exp of the numerically detected log-scale edges
  SupportInterval closed_form;  // support_nu(t)
  SupportInterval edge_equation;
  double lower_relative = 0.0;  // detected vs closed form
  double upper_relative = 0.0;
};

inline SupportComparison compare_support_nu(double t, const EdgeDetectionOptions& options = {}) {
  const double R = 2.0 * std::sqrt(t);
  const SupportInterval guess = boxplus_support(R, -t / 2.0, t / 2.0);
  const double margin = 0.5 + 0.1 * (guess.upper - guess.lower);
  const SupportInterval log_edges =
      detect_support(R, -t / 2.0, t / 2.0, guess.lower - margin, guess.upper + margin, options);
  SupportComparison out;
  out.detected = {std::exp(log_edges.lower), std::exp(log_edges.upper)};
  out.closed_form = support_nu(t);
  out.edge_equation = support_nu_from_edges(t);
  out.lower_relative = std::abs(out.detected.lower - out.closed_form.lower) / out.closed_form.lower;
  out.upper_relative = std::abs(out.detected.upper - out.closed_form.upper) / out.closed_form.upper;
  return out;
}

inline SuiteResult verify_support_suite(double t = 2.0) {
  SuiteResult r{"support", true, "", 0.0};
  const SupportComparison c = compare_support_nu(t);
  r.metric = std::max(c.lower_relative, c.upper_relative);
  r.pass = r.metric <= 0.01;
  std::ostringstream summary;
  summary << "t=" << t << ": detected [" << c.detected.lower << ", " << c.detected.upper << "], closed form ["
          << c.closed_form.lower << ", " << c.closed_form.upper << "], edge equation [" << c.edge_equation.lower
          << ", " << c.edge_equation.upper << "], max rel dev vs closed form " << r.metric << " (tol 0.01)";
  r.summary = summary.str();
  return r;
}

}  // namespace freeprob
