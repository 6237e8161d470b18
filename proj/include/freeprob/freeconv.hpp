#pragma once

// Numerical free additive convolution mu_{sc,R} [+] Unif_[b,c]: Cauchy
// transforms, the subordination fixed point, Stieltjes inversion onto a grid,
// the exponential pushforward, and support endpoints.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "freeprob/errors.hpp"
#include "freeprob/specfun.hpp"

namespace freeprob {

/// A point z with Im z > 0.
class UpperHalfPoint {
 public:
  explicit UpperHalfPoint(Complex z) : z_(z) {
    if (!(z.imag() > 0.0)) throw std::invalid_argument("UpperHalfPoint: Im z must be positive");
  }
  UpperHalfPoint(double x, double y) : UpperHalfPoint(Complex(x, y)) {}
  Complex value() const { return z_; }

 private:
  Complex z_;
};

namespace detail {

inline void require_lower_half(Complex g, const char* what) {
  if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) || g.imag() > 0.0) {
    throw branch_error(std::string(what) + ": Im G must be negative on the upper half-plane");
  }
}

// sqrt(z - R) sqrt(z + R) with principal roots behaves like z at infinity and
// has the cut on [-R, R].
inline Complex semicircle_root(Complex z, double R) { return std::sqrt(z - R) * std::sqrt(z + R); }

// x / atanh(x) - 1, with a series near 0 where the direct form cancels.
// F_unif(w) - w = -mid + (w - mid) (x / atanh(x) - 1) for x = half-width / (w - mid).
inline Complex x_over_atanh_minus_one(Complex x) {
  if (std::abs(x) > 0.1) return x / std::atanh(x) - 1.0;
  const Complex x2 = x * x;
  Complex power = x2, tail = 0.0;  // atanh(x)/x - 1 = sum_k x^{2k} / (2k+1)
  for (int k = 1; k < 40; ++k) {
    tail += power / static_cast<double>(2 * k + 1);
    power *= x2;
  }
  return -tail / (1.0 + tail);
}

}  // namespace detail

/// G(z) = 2 (z - sqrt(z^2 - R^2)) / R^2, evaluated as 2 / (z + sqrt(z^2 - R^2)).
inline Complex cauchy_semicircle(UpperHalfPoint z, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("cauchy_semicircle: R must be positive");
  const Complex w = z.value();
  const Complex g = 2.0 / (w + detail::semicircle_root(w, R));
  detail::require_lower_half(g, "cauchy_semicircle");
  return g;
}

/// G(z) = Log((z-b)/(z-c)) / (c-b), principal branch.
inline Complex cauchy_uniform(UpperHalfPoint z, double b, double c) {
  if (!(c > b)) throw std::invalid_argument("cauchy_uniform: need c > b");
  const Complex w = z.value();
  const Complex g = std::log((w - b) / (w - c)) / (c - b);
  detail::require_lower_half(g, "cauchy_uniform");
  return g;
}

struct SubordinationOptions {
  double damping = 0.5;
  double tolerance = 1e-13;
  std::size_t max_iterations = 10'000;
};

struct SubordinationResult {
  Complex cauchy;           // G of the convolution at z
  Complex omega_uniform;    // omega_1: G = G_unif(omega_1)
  Complex omega_semicircle; // omega_2: G = G_sc(omega_2)
  std::size_t iterations = 0;
};

/// Subordination for mu_{sc,R} [+] Unif_[b,c] (R >= 0, b <= c; R = 0 or b = c
/// are point-mass degenerations). Damped iteration of
///   omega_1 <- z + h_sc(z + h_unif(omega_1)),   h(w) = F(w) - w, F = 1/G,
/// with Im omega_1 projected to >= Im z. Then omega_1 + omega_2 = z + F(z).
inline SubordinationResult subordinate(UpperHalfPoint point, double R, double b, double c,
                                       const SubordinationOptions& options = {}) {
  if (R < 0.0) throw std::invalid_argument("subordinate: R must be nonnegative");
  if (b > c) throw std::invalid_argument("subordinate: need b <= c");
  const Complex z = point.value();

  auto g_unif = [b, c](Complex w) -> Complex {
    return c > b ? std::log((w - b) / (w - c)) / (c - b) : 1.0 / (w - c);
  };
  auto h_unif = [b, c](Complex w) -> Complex {
    const double mid = 0.5 * (b + c);
    if (c == b) return -mid;
    return -mid + (w - mid) * detail::x_over_atanh_minus_one(0.5 * (c - b) / (w - mid));
  };
  auto h_sc = [R](Complex w) -> Complex {
    if (R == 0.0) return 0.0;
    // F_sc(w) - w = (sqrt(w^2-R^2) - w)/2 = -R^2 / (2 (w + sqrt(w^2-R^2)))
    return -R * R / (2.0 * (w + detail::semicircle_root(w, R)));
  };

  SubordinationResult result;
  Complex omega = z;
  const double lambda = options.damping;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    const Complex mapped = z + h_sc(z + h_unif(omega));
    Complex next = (1.0 - lambda) * omega + lambda * mapped;
    if (next.imag() < z.imag()) next.imag(z.imag());
    const double step = std::abs(next - omega);
    omega = next;
    if (step < options.tolerance) {
      result.iterations = it;
      result.omega_uniform = omega;
      result.omega_semicircle = z + h_unif(omega);
      result.cauchy = g_unif(omega);
      detail::require_lower_half(result.cauchy, "boxplus_cauchy");
      return result;
    }
  }
  throw convergence_error("boxplus_cauchy: subordination did not converge (z too close to the real axis?)");
}

inline Complex boxplus_cauchy(UpperHalfPoint z, double R, double b, double c,
                              const SubordinationOptions& options = {}) {
  return subordinate(z, R, b, c, options).cauchy;
}

/// Sampled density. values >= 0; mass_estimate is the trapezoid integral.
struct DensityGrid {
  std::vector<double> abscissae;
  std::vector<double> values;
  double eta = 0.0;
  double mass_estimate = 0.0;
};

/// Trapezoid rule for int f(x) density(x) dx over the grid.
inline double grid_integral(const DensityGrid& grid, const std::function<double(double)>& weight) {
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.abscissae.size(); ++i) {
    const double x0 = grid.abscissae[i - 1], x1 = grid.abscissae[i];
    sum += 0.5 * (x1 - x0) * (weight(x0) * grid.values[i - 1] + weight(x1) * grid.values[i]);
  }
  return sum;
}

inline double grid_moment(const DensityGrid& grid, std::size_t n) {
  return grid_integral(grid, [n](double x) { return std::pow(x, static_cast<double>(n)); });
}

/// density(x) = -Im G(x + i eta) / pi on `points` equally spaced abscissae.
inline DensityGrid density_grid(double R, double b, double c, double x_lo, double x_hi, std::size_t points,
                                double eta, const SubordinationOptions& options = {}) {
  if (!(x_lo < x_hi)) throw std::invalid_argument("density_grid: need x_lo < x_hi");
  if (points < 2) throw std::invalid_argument("density_grid: need at least 2 points");
  if (!(eta > 0.0)) throw std::invalid_argument("density_grid: eta must be positive");
  DensityGrid grid;
  grid.eta = eta;
  grid.abscissae.resize(points);
  grid.values.resize(points);
  const double step = (x_hi - x_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = i + 1 == points ? x_hi : x_lo + step * static_cast<double>(i);
    grid.abscissae[i] = x;
    const Complex g = boxplus_cauchy(UpperHalfPoint(x, eta), R, b, c, options);
    grid.values[i] = std::max(0.0, -g.imag() / std::numbers::pi);
  }
  grid.mass_estimate = grid_integral(grid, [](double) { return 1.0; });
  return grid;
}

/// Change of variables y = e^x: density_y(e^x) = density_x(x) / e^x.
inline DensityGrid exp_pushforward_density(const DensityGrid& grid) {
  DensityGrid out;
  out.eta = grid.eta;
  out.abscissae.reserve(grid.abscissae.size());
  out.values.reserve(grid.values.size());
  for (std::size_t i = 0; i < grid.abscissae.size(); ++i) {
    const double y = std::exp(grid.abscissae[i]);
    out.abscissae.push_back(y);
    out.values.push_back(grid.values[i] / y);
  }
  out.mass_estimate = grid_integral(out, [](double) { return 1.0; });
  return out;
}

struct SupportInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Closed-form endpoints of supp(nu_t) obtained by substituting s = t/2 into
///   [((2s+1) - 2 sqrt(s(1+s))) e^{-sqrt(s(1+s))}, ((2s+1) + 2 sqrt(s(1+s))) e^{sqrt(s(1+s))}].
/// This expression does NOT reproduce the edges of the density computed by
/// subordination (t = 2: upper 23.97 here vs 21.09); see support_nu_from_edges.
inline SupportInterval support_nu(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("support_nu: t must be positive");
  const double s = t / 2.0;
  const double r = std::sqrt(s * (1.0 + s));
  return {((2.0 * s + 1.0) - 2.0 * r) * std::exp(-r), ((2.0 * s + 1.0) + 2.0 * r) * std::exp(r)};
}

/// Support of mu_{sc,R} [+] Unif_[b,c] from the edge equations of
/// z(u) = u + a G_unif(u), a = R^2/4: the edges are z(u) at the real u
/// outside [b,c] with (u-b)(u-c) = a.
inline SupportInterval boxplus_support(double R, double b, double c) {
  if (R < 0.0 || b > c) throw std::invalid_argument("boxplus_support: need R >= 0, b <= c");
  const double a = R * R / 4.0;
  if (a == 0.0) return {b, c};
  if (b == c) return {c - R, c + R};
  const double mid = (b + c) / 2.0, half = (c - b) / 2.0;
  const double root = std::sqrt(half * half + a);
  const double u_hi = mid + root, u_lo = mid - root;
  auto edge = [&](double u) { return u + a / (c - b) * std::log((u - b) / (u - c)); };
  return {edge(u_lo), edge(u_hi)};
}

/// supp(nu_t) as exp of the support of mu_{sc,2 sqrt t} [+] Unif_[-t/2,t/2]:
/// [((t+2) - sqrt(t(t+4)))/2 e^{-sqrt(t(t+4))/2}, ((t+2) + sqrt(t(t+4)))/2 e^{sqrt(t(t+4))/2}].
inline SupportInterval support_nu_from_edges(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("support_nu_from_edges: t must be positive");
  const SupportInterval log_support = boxplus_support(2.0 * std::sqrt(t), -t / 2.0, t / 2.0);
  return {std::exp(log_support.lower), std::exp(log_support.upper)};
}

struct EdgeDetectionOptions {
  double eta = 1e-9;
  double threshold = 1e-4;   // density level that counts as "inside"
  std::size_t scan_points = 2000;
  double relative_precision = 1e-7;
  SubordinationOptions subordination{0.5, 1e-13, 2'000'000};
};

/// Numerical support of mu_{sc,R} [+] Unif_[b,c]: scans [lo, hi] for the
/// outermost points where the smoothed density exceeds the threshold, then
/// bisects each crossing.
inline SupportInterval detect_support(double R, double b, double c, double lo, double hi,
                                      const EdgeDetectionOptions& options = {}) {
  auto inside = [&](double x) {
    const Complex g = boxplus_cauchy(UpperHalfPoint(x, options.eta), R, b, c, options.subordination);
    return -g.imag() / std::numbers::pi > options.threshold;
  };
  const std::size_t n = options.scan_points;
  const double step = (hi - lo) / static_cast<double>(n - 1);
  std::size_t first = n, last = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (inside(lo + step * static_cast<double>(i))) {
      if (first == n) first = i;
      last = i;
    }
  }
  if (first == n) throw numerical_error("detect_support: density never exceeds the threshold");
  if (first == 0 || last + 1 == n) throw numerical_error("detect_support: scan window does not contain the support");

  auto bisect = [&](double out, double in) {
    const double scale = std::max(1.0, std::abs(in));
    while (std::abs(in - out) > options.relative_precision * scale) {
      const double mid = 0.5 * (in + out);
      (inside(mid) ? in : out) = mid;
    }
    return 0.5 * (in + out);
  };
  const double x_first = lo + step * static_cast<double>(first);
  const double x_last = lo + step * static_cast<double>(last);
  return {bisect(x_first - step, x_first), bisect(x_last + step, x_last)};
}

}  // namespace freeprob
