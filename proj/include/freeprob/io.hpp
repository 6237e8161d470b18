#pragma once

// CSV / JSON serialization. Rationals are written as "p/q" strings; doubles
// use 17 significant digits so they round-trip bit-exactly.

#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "freeprob/exactcomb.hpp"
#include "freeprob/freeconv.hpp"
#include "freeprob/moments.hpp"
#include "freeprob/rational_polynomial.hpp"
#include "freeprob/rmtlab.hpp"

namespace freeprob {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

inline double parse_double(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

// --- DensityGrid -----------------------------------------------------------

inline void write_csv(std::ostream& out, const DensityGrid& grid) {
  out << "x,density\n";
  for (std::size_t i = 0; i < grid.abscissae.size(); ++i) {
    out << format_double(grid.abscissae[i]) << ',' << format_double(grid.values[i]) << '\n';
  }
}

/// Reads the `x,density` table. eta and mass_estimate are not part of the CSV;
/// mass_estimate is recomputed.
inline DensityGrid read_density_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x,density") throw std::invalid_argument("density CSV: bad header");
  DensityGrid grid;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("density CSV: malformed row");
    grid.abscissae.push_back(parse_double(line.substr(0, comma)));
    grid.values.push_back(parse_double(line.substr(comma + 1)));
  }
  grid.mass_estimate = grid_integral(grid, [](double) { return 1.0; });
  return grid;
}

inline Json to_json(const DensityGrid& grid) {
  return Json{{"abscissae", grid.abscissae},
              {"values", grid.values},
              {"eta", grid.eta},
              {"mass_estimate", grid.mass_estimate}};
}

inline DensityGrid density_from_json(const Json& j) {
  DensityGrid grid;
  grid.abscissae = j.at("abscissae").get<std::vector<double>>();
  grid.values = j.at("values").get<std::vector<double>>();
  grid.eta = j.at("eta").get<double>();
  grid.mass_estimate = j.at("mass_estimate").get<double>();
  if (grid.abscissae.size() != grid.values.size()) throw std::invalid_argument("density JSON: length mismatch");
  return grid;
}

// --- Exact values --------------------------------------------------------

inline Json to_json(const RationalPolynomial& p) {
  Json coefficients = Json::array();
  for (const auto& c : p.coefficients()) coefficients.push_back(to_string(c));
  return coefficients;
}

inline RationalPolynomial polynomial_from_json(const Json& j) {
  std::vector<BigRational> coefficients;
  for (const auto& c : j) coefficients.push_back(parse_rational(c.get<std::string>()));
  return RationalPolynomial(std::move(coefficients));
}

// --- Spectra and reports -------------------------------------------------

inline void write_csv(std::ostream& out, const EmpiricalSpectrum& spectrum) {
  out << "index,eigenvalue\n";
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
    out << i << ',' << format_double(spectrum.eigenvalues[i]) << '\n';
  }
}

inline std::vector<double> read_spectrum_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "index,eigenvalue") throw std::invalid_argument("spectrum CSV: bad header");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("spectrum CSV: malformed row");
    values.push_back(parse_double(line.substr(comma + 1)));
  }
  return values;
}

inline Json to_json(const MomentComparison& m) {
  Json j{{"order", m.order},
         {"empirical", m.empirical},
         {"oracle", m.oracle},
         {"rel_err", nullptr},
         {"std_err", m.standard_error},
         {"pass", m.pass}};
  if (m.relative_error) j["rel_err"] = *m.relative_error;
  return j;
}

inline Json to_json(const ConvergenceReport& report) {
  const auto& s = report.settings;
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json moments = Json::array(), log_moments = Json::array();
    for (const auto& m : row.moments) moments.push_back(to_json(m));
    for (const auto& m : row.log_moments) log_moments.push_back(to_json(m));
    Json r{{"N", row.N}, {"moments", moments}, {"error_metric", row.error_metric}};
    if (s.model == MatrixModel::multiplicative) r["log_moments"] = log_moments;
    rows.push_back(std::move(r));
  }
  Json j{{"model", to_string(s.model)},
         {"t", s.t},
         {"trials", s.trials},
         {"n_max", s.n_max},
         {"seed", s.seed},
         {"relative_tolerance", s.relative_tolerance},
         {"zero_oracle_sigmas", s.zero_oracle_sigmas}};
  if (s.model == MatrixModel::multiplicative) j["steps"] = s.steps;
  j["rows"] = std::move(rows);
  j["final_within_tolerance"] = report.final_within_tolerance;
  j["decreasing"] = report.decreasing;
  return j;
}

inline Json to_json(const TheoremMainReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"n", e.n},
                       {"pushforward", e.pushforward},
                       {"laguerre", e.laguerre},
                       {"rel_dev", e.relative_deviation},
                       {"pass", e.pass}});
  }
  return Json{{"t", report.t},
              {"tolerance", report.tolerance},
              {"max_rel_dev", report.max_relative_deviation},
              {"all_pass", report.all_pass},
              {"entries", entries}};
}

}  // namespace freeprob
