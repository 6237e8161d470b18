#pragma once

// Random-matrix laboratory: the additive model B + (t/N) diag(rho) and the
// matrix geometric Brownian motion H = G G^*, with empirical spectral moments
// compared against the exact engines.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "freeprob/errors.hpp"
#include "freeprob/moments.hpp"
#include "freeprob/rng.hpp"

namespace freeprob {

enum class MatrixModel { additive, multiplicative };

inline const char* to_string(MatrixModel model) {
  return model == MatrixModel::additive ? "additive" : "multiplicative";
}

struct AdditiveModelConfig {
  std::size_t N = 2;
  double t = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (N < 2) throw std::invalid_argument("additive model: N >= 2");
    if (!(t > 0.0)) throw std::invalid_argument("additive model: t > 0");
  }
};

/// steps >= ceil(10 t) is recommended but not enforced.
struct MultiplicativeModelConfig {
  std::size_t N = 2;
  double t = 1.0;
  std::size_t steps = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (N < 2) throw std::invalid_argument("multiplicative model: N >= 2");
    if (!(t > 0.0)) throw std::invalid_argument("multiplicative model: t > 0");
    if (steps < 1) throw std::invalid_argument("multiplicative model: steps >= 1");
  }
};

struct EmpiricalSpectrum {
  std::vector<double> eigenvalues;  // ascending
  MatrixModel model = MatrixModel::additive;
  std::size_t N = 0;
  double t = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::size_t steps = 0;  // 0 for the additive model

  std::string fingerprint() const {
    std::ostringstream out;
    out << to_string(model) << ":N=" << N << ":t=" << t << ":seed=" << seed << ":stream=" << stream;
    if (model == MatrixModel::multiplicative) out << ":steps=" << steps;
    return out.str();
  }
};

namespace detail {

using ComplexMatrix = Eigen::MatrixXcd;

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw numerical_error("hermitian eigensolver failed");
  const auto& values = solver.eigenvalues();
  std::vector<double> out(values.data(), values.data() + values.size());
  std::sort(out.begin(), out.end());
  return out;
}

// Hermitian matrix with E|m_ij|^2 = variance for every entry (diagonal real).
inline ComplexMatrix gaussian_hermitian(std::size_t n, double variance, NormalStream& normal) {
  ComplexMatrix m(n, n);
  const double diag_sd = std::sqrt(variance);
  const double part_sd = std::sqrt(variance / 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = diag_sd * normal();
    for (std::size_t j = i + 1; j < n; ++j) {
      const double re = part_sd * normal();
      const double im = part_sd * normal();
      m(i, j) = {re, im};
      m(j, i) = {re, -im};
    }
  }
  return m;
}

// i.i.d. circular complex Gaussian entries with E|x|^2 = variance.
inline ComplexMatrix gaussian_ginibre(std::size_t n, double variance, NormalStream& normal) {
  ComplexMatrix m(n, n);
  const double part_sd = std::sqrt(variance / 2.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double re = part_sd * normal();
      m(i, j) = {re, part_sd * normal()};
    }
  }
  return m;
}

}  // namespace detail

/// (t/N) rho with rho = (-N+1, -N+3, ..., N-1): the noise-free spectrum.
inline std::vector<double> additive_drift_spectrum(std::size_t N, double t) {
  std::vector<double> out(N);
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = t * (2.0 * static_cast<double>(i) - static_cast<double>(N) + 1.0) / static_cast<double>(N);
  }
  return out;
}

/// One exact draw of M = B + (t/N) diag(rho), where B is Hermitian Gaussian
/// with E|B_ij|^2 = t/N (ESD -> mu_{sc,2 sqrt t}). The ESD of M tends to
/// mu_{sc,2 sqrt t} [+] Unif_[-t,t].
inline EmpiricalSpectrum sample_additive(const AdditiveModelConfig& config, std::uint64_t stream = 0) {
  config.validate();
  NormalStream normal(Xoshiro256(config.seed, stream));
  const double variance = config.t / static_cast<double>(config.N);
  detail::ComplexMatrix m = detail::gaussian_hermitian(config.N, variance, normal);
  const auto drift = additive_drift_spectrum(config.N, config.t);
  for (std::size_t i = 0; i < config.N; ++i) m(i, i) += drift[i];

  EmpiricalSpectrum spectrum;
  spectrum.eigenvalues = detail::hermitian_eigenvalues(m);
  spectrum.model = MatrixModel::additive;
  spectrum.N = config.N;
  spectrum.t = config.t;
  spectrum.seed = config.seed;
  spectrum.stream = stream;
  return spectrum;
}

/// Simulates G_{t/2} by left increments G <- G exp(dC) with dC i.i.d. circular
/// Gaussian, E|dC_ij|^2 = delta/N, delta = (t/2)/steps, and returns the
/// spectrum of H = G G^*. The Ito correction vanishes because E[dC dC] = 0 for
/// circular entries, so E tr(H)/N = e^{t/2} without a drift term. exp(dC) is
/// the degree-4 Taylor polynomial (local error O(delta^{5/2}), and the
/// first neglected term has mean zero).
inline EmpiricalSpectrum sample_multiplicative(const MultiplicativeModelConfig& config, std::uint64_t stream = 0) {
  config.validate();
  NormalStream normal(Xoshiro256(config.seed, stream));
  const std::size_t n = config.N;
  const double delta = config.t / 2.0 / static_cast<double>(config.steps);
  const detail::ComplexMatrix identity = detail::ComplexMatrix::Identity(n, n);

  detail::ComplexMatrix g = identity;
  detail::ComplexMatrix increment(n, n);
  for (std::size_t step = 0; step < config.steps; ++step) {
    const detail::ComplexMatrix x = detail::gaussian_ginibre(n, delta / static_cast<double>(n), normal);
    increment.noalias() = x * 0.25;
    increment += identity;
    for (double k : {3.0, 2.0, 1.0}) {
      detail::ComplexMatrix next = identity;
      next.noalias() += (x / k) * increment;
      increment.swap(next);
    }
    detail::ComplexMatrix updated(n, n);
    updated.noalias() = g * increment;
    g.swap(updated);
  }
  detail::ComplexMatrix h(n, n);
  h.noalias() = g * g.adjoint();

  EmpiricalSpectrum spectrum;
  spectrum.eigenvalues = detail::hermitian_eigenvalues(h);
  if (spectrum.eigenvalues.front() <= 0.0) {
    throw numerical_error("sample_multiplicative: nonpositive eigenvalue (discretization too coarse)");
  }
  spectrum.model = MatrixModel::multiplicative;
  spectrum.N = n;
  spectrum.t = config.t;
  spectrum.seed = config.seed;
  spectrum.stream = stream;
  spectrum.steps = config.steps;
  return spectrum;
}

enum class SpectrumTransform { identity, log };

/// (1/N) sum_i f(lambda_i)^n for n = 1..n_max.
inline std::vector<double> empirical_moments(const EmpiricalSpectrum& spectrum, std::size_t n_max,
                                             SpectrumTransform transform = SpectrumTransform::identity) {
  std::vector<double> values = spectrum.eigenvalues;
  if (values.empty()) throw std::invalid_argument("empirical_moments: empty spectrum");
  if (transform == SpectrumTransform::log) {
    for (double& v : values) {
      if (!(v > 0.0)) throw std::domain_error("empirical_moments: log of a nonpositive eigenvalue");
      v = std::log(v);
    }
  }
  std::vector<double> moments(n_max, 0.0);
  for (double v : values) {
    double power = 1.0;
    for (std::size_t n = 0; n < n_max; ++n) {
      power *= v;
      moments[n] += power;
    }
  }
  for (double& m : moments) m /= static_cast<double>(values.size());
  return moments;
}

struct MomentComparison {
  std::size_t order = 0;
  double empirical = 0.0;  // trial average
  double oracle = 0.0;
  std::optional<double> relative_error;  // empty when the oracle value is 0
  double standard_error = 0.0;           // sample sd / sqrt(trials)
  bool pass = false;
};

struct ConvergenceRow {
  std::size_t N = 0;
  std::vector<MomentComparison> moments;
  std::vector<MomentComparison> log_moments;  // multiplicative model only
  double error_metric = 0.0;  // max relative error over nonzero oracle values
  double error_noise = 0.0;   // standard error of the moment attaining error_metric, relative
};

struct ConvergenceSettings {
  MatrixModel model = MatrixModel::additive;
  double t = 1.0;
  std::vector<std::size_t> N_list{50, 200, 800};
  std::size_t trials = 50;
  std::size_t n_max = 4;
  std::size_t steps = 200;  // multiplicative only
  std::uint64_t seed = 0;
  double relative_tolerance = 0.02;
  double zero_oracle_sigmas = 3.0;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct ConvergenceReport {
  ConvergenceSettings settings;
  std::vector<ConvergenceRow> rows;
  bool final_within_tolerance = false;
  bool decreasing = false;  // error_metric non-increasing up to 2 standard errors
};

namespace detail {

inline std::vector<MomentComparison> compare(const std::vector<std::vector<double>>& per_trial,
                                             const std::vector<double>& oracle, double rel_tol, double sigmas) {
  const std::size_t trials = per_trial.size();
  std::vector<MomentComparison> out;
  for (std::size_t n = 0; n < oracle.size(); ++n) {
    double mean = 0.0;
    for (const auto& row : per_trial) mean += row[n];
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (const auto& row : per_trial) var += (row[n] - mean) * (row[n] - mean);
    var = trials > 1 ? var / static_cast<double>(trials - 1) : 0.0;

    MomentComparison c;
    c.order = n + 1;
    c.empirical = mean;
    c.oracle = oracle[n];
    c.standard_error = std::sqrt(var / static_cast<double>(trials));
    if (oracle[n] != 0.0) {
      c.relative_error = std::abs(mean - oracle[n]) / std::abs(oracle[n]);
      c.pass = *c.relative_error <= rel_tol;
    } else {
      c.pass = std::abs(mean) <= sigmas * c.standard_error;
    }
    out.push_back(c);
  }
  return out;
}

template <class Work>
void run_trials(std::size_t trials, unsigned threads, Work&& work) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));
  if (threads <= 1) {
    for (std::size_t i = 0; i < trials; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < trials; i += threads) work(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Oracle moments of the limiting law for n = 1..n_max.
inline std::vector<double> oracle_moments(MatrixModel model, double t, std::size_t n_max) {
  std::vector<double> out;
  const BigRational exact_t(t);
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (model == MatrixModel::additive) {
      out.push_back(static_cast<double>(moments_sc_unif_general(n, exact_t, -exact_t, exact_t)));
    } else {
      out.push_back(moments_nu_laguerre(n, t));
    }
  }
  return out;
}

/// Log-spectrum oracle of the multiplicative model: moments of
/// mu_{sc,2 sqrt t} [+] Unif_[-t/2,t/2].
inline std::vector<double> oracle_log_moments(double t, std::size_t n_max) {
  std::vector<double> out;
  const BigRational exact_t(t);
  for (std::size_t n = 1; n <= n_max; ++n) {
    out.push_back(static_cast<double>(moments_sc_unif_general(n, exact_t, -exact_t / 2, exact_t / 2)));
  }
  return out;
}

/// Trial k of every N uses RNG stream k of `seed`, so results do not depend
/// on the number of threads.
inline ConvergenceReport convergence_report(const ConvergenceSettings& settings) {
  if (!(settings.t > 0.0)) throw std::invalid_argument("convergence_report: t > 0");
  if (settings.trials < 1) throw std::invalid_argument("convergence_report: trials >= 1");
  if (settings.N_list.empty()) throw std::invalid_argument("convergence_report: empty N list");

  ConvergenceReport report;
  report.settings = settings;
  const auto oracle = oracle_moments(settings.model, settings.t, settings.n_max);
  const auto log_oracle = oracle_log_moments(settings.t, settings.n_max);

  for (std::size_t N : settings.N_list) {
    std::vector<std::vector<double>> moments(settings.trials), log_moments(settings.trials);
    detail::run_trials(settings.trials, settings.threads, [&](std::size_t trial) {
      EmpiricalSpectrum spectrum;
      if (settings.model == MatrixModel::additive) {
        spectrum = sample_additive({N, settings.t, settings.seed}, trial);
      } else {
        spectrum = sample_multiplicative({N, settings.t, settings.steps, settings.seed}, trial);
        log_moments[trial] = empirical_moments(spectrum, settings.n_max, SpectrumTransform::log);
      }
      moments[trial] = empirical_moments(spectrum, settings.n_max);
    });

    ConvergenceRow row;
    row.N = N;
    row.moments = detail::compare(moments, oracle, settings.relative_tolerance, settings.zero_oracle_sigmas);
    if (settings.model == MatrixModel::multiplicative) {
      row.log_moments =
          detail::compare(log_moments, log_oracle, settings.relative_tolerance, settings.zero_oracle_sigmas);
    }
    for (const auto& m : row.moments) {
      if (m.relative_error && *m.relative_error >= row.error_metric) {
        row.error_metric = *m.relative_error;
        row.error_noise = m.standard_error / std::abs(m.oracle);
      }
    }
    report.rows.push_back(std::move(row));
  }

  const auto& last = report.rows.back();
  report.final_within_tolerance =
      std::all_of(last.moments.begin(), last.moments.end(), [](const auto& m) { return m.pass; });
  report.decreasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& prev = report.rows[i - 1];
    const auto& cur = report.rows[i];
    if (cur.error_metric > prev.error_metric + 2.0 * cur.error_noise) report.decreasing = false;
  }
  return report;
}

}  // namespace freeprob
