// freeprob command-line front end.
//
//   freeprob moments --n-max 8 [--mode polynomial|at-t --t 1/2] [--oracle]
//   freeprob nu (--n 3 | --n-max 5 | --alpha 0.5+2i) --t 1
//   freeprob verify stirling|kummer|oracle|theorem-main|fractional|density|support|all
//   freeprob density --t 1 [--points 2000 --eta 1e-3 --exp]
//   freeprob simulate additive|multiplicative --N 400 --t 1 --trials 50 [--steps 200]
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical failure.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "freeprob/freeprob.hpp"

namespace fp = freeprob;

namespace {

enum class Format { table, csv, json };

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  Format format = Format::table;
  std::string out;
  std::uint64_t seed = 0;
};

fp::Complex parse_complex(const std::string& text) {
  static const std::string num = R"((?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)";
  static const std::regex real_only("^([+-]?" + num + ")$");
  static const std::regex imag_only("^([+-]?)(" + num + ")?i$");
  static const std::regex both("^([+-]?" + num + ")([+-])(" + num + ")?i$");
  std::smatch m;
  if (std::regex_match(text, m, real_only)) return {std::stod(m[1]), 0.0};
  if (std::regex_match(text, m, imag_only)) {
    const double mag = m[2].matched ? std::stod(m[2]) : 1.0;
    return {0.0, m[1] == "-" ? -mag : mag};
  }
  if (std::regex_match(text, m, both)) {
    const double mag = m[3].matched ? std::stod(m[3]) : 1.0;
    return {std::stod(m[1]), m[2] == "-" ? -mag : mag};
  }
  throw Usage("malformed complex number '" + text + "' (expected a, bi or a+bi)");
}

std::string complex_text(fp::Complex z) {
  std::ostringstream s;
  s << std::setprecision(12) << z.real();
  if (z.imag() != 0.0) s << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return s.str();
}

std::string num(double v, int digits = 12) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

void require_positive_t(double t) {
  if (!(t > 0.0)) throw Usage("t must be positive");
}

// Aligned columns for --format table.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : rows_{std::move(header)} {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print_table(std::ostream& out) const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      for (std::size_t i = 0; i < rows_[r].size(); ++i) {
        out << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i])) << rows_[r][i];
      }
      out << '\n';
      if (r == 0) {
        for (std::size_t i = 0; i < width.size(); ++i) out << (i ? "  " : "") << std::string(width[i], '-');
        out << '\n';
      }
    }
  }

  void print_csv(std::ostream& out) const {
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw Usage("cannot write '" + g.out + "'");
  file << text;
}

void render(const Globals& g, const std::string& header, const Table& table, const fp::Json& json) {
  std::ostringstream out;
  switch (g.format) {
    case Format::table:
      out << header;
      table.print_table(out);
      break;
    case Format::csv:
      table.print_csv(out);
      break;
    case Format::json:
      out << json.dump(2) << '\n';
      break;
  }
  emit(g, out.str());
}

// --- moments ---------------------------------------------------------------

struct MomentsArgs {
  std::size_t n_max = 5;
  std::string mode = "polynomial";
  std::string t;
  bool oracle = false;
};

int cmd_moments(const Globals& g, const MomentsArgs& a) {
  const bool at_t = a.mode == "at-t";
  std::optional<fp::BigRational> t;
  if (at_t) {
    if (a.t.empty()) throw Usage("--mode at-t needs --t");
    t = fp::parse_rational(a.t);
    if (*t <= 0) throw Usage("t must be positive");
  }
  std::vector<fp::RationalPolynomial> oracle;
  if (a.oracle) oracle = fp::moments_ode_oracle(a.n_max);

  std::vector<std::string> head{"n", at_t ? "m_n(t)" : "m_n"};
  if (at_t) head.push_back("decimal");
  if (a.oracle) head.push_back("oracle_diff");
  Table table(head);
  fp::Json rows = fp::Json::array();
  bool all_zero = true;
  for (std::size_t n = 0; n <= a.n_max; ++n) {
    const auto p = fp::m_n_polynomial(n);
    std::vector<std::string> row{std::to_string(n)};
    fp::Json j{{"n", n}, {"polynomial", fp::to_json(p)}};
    if (at_t) {
      const fp::BigRational v = p(*t);
      row.push_back(fp::to_string(v));
      row.push_back(num(static_cast<double>(v), 17));
      j["value"] = fp::to_string(v);
    } else {
      row.push_back(p.to_string());
    }
    if (a.oracle) {
      const auto diff = p - oracle[n];
      all_zero = all_zero && diff == fp::RationalPolynomial();
      row.push_back(diff.to_string());
      j["oracle_diff"] = fp::to_json(diff);
    }
    table.add(row);
    rows.push_back(std::move(j));
  }
  std::ostringstream header;
  header << "# moments of sc(2 sqrt t) [+] Unif[-t,0], n <= " << a.n_max << " (exact)";
  if (at_t) header << ", t = " << fp::to_string(*t);
  header << '\n';
  fp::Json json{{"mode", a.mode}, {"n_max", a.n_max}};
  if (at_t) json["t"] = fp::to_string(*t);
  json["rows"] = std::move(rows);
  if (a.oracle) json["oracle_all_zero"] = all_zero;
  render(g, header.str(), table, json);
  return all_zero ? 0 : 1;
}

// --- nu --------------------------------------------------------------------

struct NuArgs {
  std::optional<std::size_t> n;
  std::optional<std::size_t> n_max;
  std::string alpha;
  double t = 1.0;
};

int cmd_nu(const Globals& g, const NuArgs& a) {
  require_positive_t(a.t);
  const int chosen = (a.n ? 1 : 0) + (a.n_max ? 1 : 0) + (a.alpha.empty() ? 0 : 1);
  if (chosen != 1) throw Usage("nu: give exactly one of --n, --n-max, --alpha");
  std::ostringstream header;
  header << "# moments of nu_t, t = " << a.t << "; agreement tolerance " << fp::kFractionalAgreement << '\n';

  if (!a.alpha.empty()) {
    const fp::Complex alpha = parse_complex(a.alpha);
    const fp::Complex via_1f1 = alpha == fp::Complex(0.0)
                                    ? fp::Complex(1.0)
                                    : std::exp(alpha * a.t / 2.0) * fp::kummer_1f1(1.0 - alpha, 2.0, -alpha * a.t);
    const fp::Complex via_series = fp::fractional_moment_nu_series(alpha, a.t);
    const double rel = std::abs(via_1f1 - via_series) / std::abs(via_series);
    Table table({"alpha", "1F1", "binomial_series", "rel_diff"});
    table.add({complex_text(alpha), complex_text(via_1f1), complex_text(via_series), num(rel, 3)});
    fp::Json json{{"t", a.t},
                  {"alpha", {alpha.real(), alpha.imag()}},
                  {"hypergeometric", {via_1f1.real(), via_1f1.imag()}},
                  {"binomial_series", {via_series.real(), via_series.imag()}},
                  {"rel_diff", rel}};
    render(g, header.str(), table, json);
    return rel <= fp::kFractionalAgreement ? 0 : 1;
  }

  const std::size_t lo = a.n ? *a.n : 1, hi = a.n ? *a.n : *a.n_max;
  Table table({"n", "laguerre", "1F1", "rel_diff"});
  fp::Json rows = fp::Json::array();
  bool pass = true;
  for (std::size_t n = lo; n <= hi; ++n) {
    const double nd = static_cast<double>(n);
    const double lag = fp::moments_nu_laguerre(n, a.t);
    const double hyp = n == 0 ? 1.0 : std::exp(nd * a.t / 2.0) * fp::exp_mgf_additive(nd, a.t).real();
    const double rel = std::abs(lag - hyp) / std::abs(lag);
    pass = pass && rel <= fp::kFractionalAgreement;
    table.add({std::to_string(n), num(lag), num(hyp), num(rel, 3)});
    rows.push_back({{"n", n}, {"laguerre", lag}, {"hypergeometric", hyp}, {"rel_diff", rel}});
  }
  render(g, header.str(), table, fp::Json{{"t", a.t}, {"rows", rows}});
  return pass ? 0 : 1;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::size_t l_max = 25;
  std::size_t m_max = 25;
  std::optional<std::size_t> n_max;
  std::optional<double> t;
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  if (a.t) require_positive_t(*a.t);
  const std::vector<double> times = a.t ? std::vector<double>{*a.t} : std::vector<double>{0.1, 1.0, 4.0};
  std::vector<fp::SuiteResult> results;
  auto want = [&](const char* name) { return a.suite == "all" || a.suite == name; };
  if (want("stirling")) results.push_back(fp::verify_stirling_suite(a.l_max, a.m_max));
  if (want("oracle")) results.push_back(fp::verify_oracle_suite(a.n_max.value_or(30)));
  if (want("kummer")) results.push_back(fp::verify_kummer_suite(g.seed ? g.seed : 2024));
  if (want("theorem-main")) results.push_back(fp::verify_theorem_main_suite(a.n_max.value_or(25), times));
  if (want("fractional")) results.push_back(fp::verify_fractional_suite(40, g.seed ? g.seed : 7));
  if (want("density")) results.push_back(fp::verify_density_suite());
  if (want("support")) results.push_back(fp::verify_support_suite(a.t.value_or(2.0)));

  bool all = true;
  Table table({"suite", "result", "summary"});
  fp::Json suites = fp::Json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    table.add({r.name, r.pass ? "PASS" : "FAIL", r.summary});
    suites.push_back({{"suite", r.name}, {"pass", r.pass}, {"metric", r.metric}, {"summary", r.summary}});
  }
  const std::string header =
      "# verify " + a.suite +
      "; exact suites use zero tolerance, 1F1/Laguerre 1e-10, density eta=1e-3 points=4000 tol 1e-3, "
      "support eta=1e-9 tol 1%, subordination damping 0.5 step tol 1e-13\n";
  render(g, header, table, fp::Json{{"suite", a.suite}, {"all_pass", all}, {"suites", suites}});
  return all ? 0 : 1;
}

// --- density ---------------------------------------------------------------

struct DensityArgs {
  double t = 1.0;
  std::size_t points = 2000;
  double eta = 1e-3;
  bool exp = false;
};

int cmd_density(const Globals& g, const DensityArgs& a) {
  require_positive_t(a.t);
  if (a.points < 2) throw Usage("--points must be at least 2");
  if (!(a.eta > 0.0)) throw Usage("--eta must be positive");
  const fp::SubordinationOptions sub;
  fp::DensityGrid grid = fp::covering_density_grid(a.t, -a.t / 2.0, a.t / 2.0, a.points, a.eta);
  if (a.exp) grid = fp::exp_pushforward_density(grid);

  const fp::SupportInterval closed = fp::support_nu(a.t);
  const fp::SupportInterval edges = fp::support_nu_from_edges(a.t);
  auto scaled = [&](const fp::SupportInterval& s) {
    return a.exp ? std::vector<double>{s.lower, s.upper} : std::vector<double>{std::log(s.lower), std::log(s.upper)};
  };
  fp::Json sidecar{{"measure", a.exp ? "nu_t = exp(sc(2 sqrt t) [+] Unif[-t/2,t/2])" : "sc(2 sqrt t) [+] Unif[-t/2,t/2]"},
                   {"scale", a.exp ? "exp" : "log"},
                   {"t", a.t},
                   {"points", a.points},
                   {"eta", a.eta},
                   {"damping", sub.damping},
                   {"subordination_tolerance", sub.tolerance},
                   {"max_iterations", sub.max_iterations},
                   {"mass_estimate", grid.mass_estimate},
                   {"support_closed_form", scaled(closed)},
                   {"support_edge_equation", scaled(edges)}};

  std::ostringstream out;
  if (g.format == Format::json) {
    fp::Json j = sidecar;
    j["grid"] = fp::to_json(grid);
    out << j.dump(2) << '\n';
  } else {
    if (g.format == Format::table && g.out.empty()) {
      out << "# density of " << sidecar["measure"].get<std::string>() << ", t=" << a.t << ", eta=" << a.eta
          << ", points=" << a.points << ", damping=" << sub.damping << ", tol=" << sub.tolerance
          << ", mass_estimate=" << num(grid.mass_estimate) << '\n'
          << "# support (closed form) [" << num(sidecar["support_closed_form"][0].get<double>()) << ", "
          << num(sidecar["support_closed_form"][1].get<double>()) << "], (edge equation) ["
          << num(sidecar["support_edge_equation"][0].get<double>()) << ", "
          << num(sidecar["support_edge_equation"][1].get<double>()) << "]\n";
    }
    fp::write_csv(out, grid);
    if (!g.out.empty()) {
      std::ofstream side(g.out + ".json", std::ios::binary);
      if (!side) throw Usage("cannot write '" + g.out + ".json'");
      side << sidecar.dump(2) << '\n';
    }
  }
  emit(g, out.str());
  return 0;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string model;
  std::vector<std::size_t> N{400};
  double t = 1.0;
  std::size_t trials = 50;
  std::size_t steps = 200;
  std::size_t n_max = 4;
  double tolerance = 0.02;
  unsigned threads = 0;
};

int cmd_simulate(const Globals& g, const SimulateArgs& a) {
  require_positive_t(a.t);
  fp::ConvergenceSettings s;
  s.model = a.model == "additive" ? fp::MatrixModel::additive : fp::MatrixModel::multiplicative;
  s.t = a.t;
  s.N_list = a.N;
  s.trials = a.trials;
  s.steps = a.steps;
  s.n_max = a.n_max;
  s.seed = g.seed;
  s.relative_tolerance = a.tolerance;
  s.threads = a.threads;
  for (std::size_t N : s.N_list) {
    if (N < 2) throw Usage("--N must be at least 2");
  }
  if (s.trials < 1) throw Usage("--trials must be at least 1");
  if (s.model == fp::MatrixModel::multiplicative && s.steps < 1) throw Usage("--steps must be at least 1");

  const fp::ConvergenceReport report = fp::convergence_report(s);
  Table table({"N", "kind", "n", "empirical", "oracle", "rel_err", "std_err", "pass"});
  auto add_rows = [&](std::size_t N, const char* kind, const std::vector<fp::MomentComparison>& rows) {
    for (const auto& m : rows) {
      table.add({std::to_string(N), kind, std::to_string(m.order), num(m.empirical, 8), num(m.oracle, 8),
                 m.relative_error ? num(*m.relative_error, 3) : "-", num(m.standard_error, 3), m.pass ? "yes" : "no"});
    }
  };
  for (const auto& row : report.rows) {
    add_rows(row.N, "moment", row.moments);
    add_rows(row.N, "log-moment", row.log_moments);
  }
  std::ostringstream header;
  header << "# simulate " << fp::to_string(s.model) << ": t=" << s.t << ", trials=" << s.trials << ", seed=" << s.seed;
  if (s.model == fp::MatrixModel::multiplicative) header << ", steps=" << s.steps;
  header << ", rel_tol=" << s.relative_tolerance << ", zero-oracle rule |mean| <= " << s.zero_oracle_sigmas
         << " SE\n# final_within_tolerance=" << (report.final_within_tolerance ? "yes" : "no")
         << ", decreasing=" << (report.decreasing ? "yes" : "no") << '\n';
  render(g, header.str(), table, fp::to_json(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numerical moments and densities of free convolutions of semicircle and uniform laws"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::string format = "table";
  app.add_option("--format", format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", g.out, "write output to PATH instead of stdout");
  app.add_option("--seed", g.seed, "64-bit seed")->capture_default_str();

  MomentsArgs ma;
  auto* moments = app.add_subcommand("moments", "exact moment polynomials m_n(t)");
  moments->add_option("--n-max", ma.n_max)->capture_default_str();
  moments->add_option("--mode", ma.mode)->check(CLI::IsMember({"polynomial", "at-t"}))->capture_default_str();
  moments->add_option("--t", ma.t, "rational, e.g. 1/2 or 0.25 (at-t mode)");
  moments->add_flag("--oracle", ma.oracle, "diff against the ODE recursion");

  NuArgs na;
  auto* nu = app.add_subcommand("nu", "moments of nu_t by Laguerre and 1F1 forms");
  nu->add_option("--n", na.n, "single integer order");
  nu->add_option("--n-max", na.n_max, "orders 1..n-max");
  nu->add_option("--alpha", na.alpha, "complex order a+bi");
  nu->add_option("--t", na.t)->capture_default_str();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run invariant suites");
  verify->add_option("suite", va.suite)
      ->check(CLI::IsMember({"stirling", "kummer", "oracle", "theorem-main", "fractional", "density", "support", "all"}))
      ->capture_default_str();
  verify->add_option("--l-max", va.l_max)->capture_default_str();
  verify->add_option("--m-max", va.m_max)->capture_default_str();
  verify->add_option("--n-max", va.n_max);
  verify->add_option("--t", va.t);

  DensityArgs da;
  auto* density = app.add_subcommand("density", "density grid by subordination");
  density->add_option("--t", da.t)->capture_default_str();
  density->add_option("--points", da.points)->capture_default_str();
  density->add_option("--eta", da.eta)->capture_default_str();
  density->add_flag("--exp", da.exp, "exp-pushforward (the law nu_t)");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "random-matrix Monte Carlo");
  simulate->add_option("model", sa.model)->required()->check(CLI::IsMember({"additive", "multiplicative"}));
  simulate->add_option("--N", sa.N, "matrix sizes")->capture_default_str();
  simulate->add_option("--t", sa.t)->capture_default_str();
  simulate->add_option("--trials", sa.trials)->capture_default_str();
  simulate->add_option("--steps", sa.steps)->capture_default_str();
  simulate->add_option("--n-max", sa.n_max)->capture_default_str();
  simulate->add_option("--rel-tol", sa.tolerance)->capture_default_str();
  simulate->add_option("--threads", sa.threads, "0: all cores; results do not depend on it")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  g.format = format == "csv" ? Format::csv : format == "json" ? Format::json : Format::table;

  try {
    if (*moments) return cmd_moments(g, ma);
    if (*nu) return cmd_nu(g, na);
    if (*verify) return cmd_verify(g, va);
    if (*density) return cmd_density(g, da);
    if (*simulate) return cmd_simulate(g, sa);
  } catch (const Usage& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
