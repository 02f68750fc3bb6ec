#ifndef DSROSC_CLI_HPP
#define DSROSC_CLI_HPP

// Command-line front end. Each cmd_* renders into a stream so the same code
// backs the dsr-osc binary and the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "dsrosc/csv.hpp"
#include "dsrosc/errors.hpp"
#include "dsrosc/kinematics.hpp"
#include "dsrosc/params.hpp"
#include "dsrosc/spectra.hpp"
#include "dsrosc/special_functions.hpp"
#include "dsrosc/verification.hpp"

namespace dsrosc::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kModel = 3 };

enum class OutputFormat { Csv, Tsv };

inline constexpr std::string_view kFormatEnv = "DSR_OSC_DEFAULT_FORMAT";

struct CliConfig {
  std::string subcommand;
  std::vector<GeometryKind> geometries{kAllGeometries.begin(), kAllGeometries.end()};
  double Omega = 0.10;
  double eps = 0.20;
  std::uint64_t n_max = 25;
  std::int64_t basis = 128;

  // wavefunction
  GeometryKind geometry = GeometryKind::Spacelike;
  std::uint32_t level = 0;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::size_t points = 2001;

  // verify
  std::string suite = "all";
  std::vector<double> eps_list{0.2, 0.1, 1e-2, 1e-3, 1e-4};
  std::size_t grid_points = 4001;
  std::uint32_t grid_levels = 3;
  std::int64_t gram_states = 8;
  double tol_iso = 1e-8;
  double tol_grid = 1e-5;
  double tol_eta = 1e-8;
  double tol_pseudo = 1e-6;
  double tol_quad = 1e-7;

  // map
  double E = 1.0;
  double p = 0.0;

  std::string out_path;
  OutputFormat format = OutputFormat::Csv;

  ModelParams params() const { return ModelParams::dimensionless(Omega, eps); }
  char separator() const { return format == OutputFormat::Tsv ? '\t' : ','; }
};

namespace detail {

inline std::string geometry_list(const std::vector<GeometryKind>& gs) {
  std::string s;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (i) s += ',';
    s += token(gs[i]);
  }
  return s;
}

inline std::string num(double v) { return csv::format_number(v); }

inline void echo_config(csv::Writer& w, const CliConfig& c) {
  w.comment("dsr-osc " + c.subcommand);
  w.comment("omega=" + num(c.Omega) + " eps=" + num(c.eps) + " nmax=" + std::to_string(c.n_max) +
            " geometries=" + geometry_list(c.geometries) +
            " format=" + (c.format == OutputFormat::Tsv ? "tsv" : "csv"));
}

/// Geometries in enum order, deduplicated.
inline std::vector<GeometryKind> ordered(const std::vector<GeometryKind>& gs) {
  std::vector<GeometryKind> out;
  for (auto g : kAllGeometries) {
    for (auto h : gs) {
      if (g == h) {
        out.push_back(g);
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

inline void cmd_spectrum(const CliConfig& c, std::ostream& os) {
  const ModelParams params = c.params();
  const auto geometries = detail::ordered(c.geometries);
  csv::Writer w(os, c.separator());
  detail::echo_config(w, c);
  w.header({"n", "geometry", "e_plus", "e_minus", "admissible"});
  for (std::uint64_t n = 0; n <= c.n_max; ++n) {
    for (auto g : geometries) {
      const BranchPair b = energy_branches(g, n, params);
      w.field(n).field(token(g)).field(b.e_plus).field(b.e_minus).field(b.admissible);
      w.end_row();
    }
  }
}

inline void cmd_shifts(const CliConfig& c, std::ostream& os) {
  const ModelParams params = c.params();
  const auto geometries = detail::ordered(c.geometries);
  csv::Writer w(os, c.separator());
  detail::echo_config(w, c);
  w.header({"n", "geometry", "delta_e_plus", "leading_order"});
  for (const ShiftReport& r : shift_table(params, c.n_max, geometries)) {
    w.field(r.n).field(token(r.geometry)).field(r.delta_e_plus).field(r.leading);
    w.end_row();
  }
}

inline constexpr std::uint32_t kMaxWavefunctionLevel = 64;
inline constexpr std::size_t kMaxWavefunctionPoints = 100000;

inline void cmd_wavefunction(const CliConfig& c, std::ostream& os) {
  if (c.level > kMaxWavefunctionLevel) fail(ErrorKind::InvalidArgument, "wavefunction level must be <= 64");
  if (c.points < 2 || c.points > kMaxWavefunctionPoints) {
    fail(ErrorKind::InvalidArgument, "points must lie in [2, 100000]");
  }
  const ModelParams params = c.params();
  const double L = default_grid_half_width(params);
  const double x_min = c.x_min.value_or(-L);
  const double x_max = c.x_max.value_or(L);
  if (!(x_max > x_min)) fail(ErrorKind::InvalidArgument, "xmax must exceed xmin");

  std::vector<double> xs(c.points);
  const double h = (x_max - x_min) / static_cast<double>(c.points - 1);
  for (std::size_t i = 0; i < c.points; ++i) xs[i] = x_min + h * static_cast<double>(i);
  const auto samples = sample_wavefunction(c.geometry, c.level, xs, params);

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    integral += 0.5 * h * (std::norm(samples[i].value) + std::norm(samples[i + 1].value));
  }

  csv::Writer w(os, c.separator());
  w.comment("dsr-osc wavefunction");
  w.comment("omega=" + detail::num(c.Omega) + " eps=" + detail::num(c.eps) + " geometry=" +
            std::string(token(c.geometry)) + " n=" + std::to_string(c.level) + " xmin=" + detail::num(x_min) +
            " xmax=" + detail::num(x_max) + " points=" + std::to_string(c.points));
  const DeformationShifts s = deformation_shifts(params);
  w.comment("kappa=" + detail::num(s.kappa) + " delta=" + detail::num(s.delta));
  w.comment("trapezoid_integral_abs2=" + detail::num(integral));
  w.header({"x", "re", "im", "abs2"});
  for (const auto& smp : samples) {
    w.field(smp.x).field(smp.value.real()).field(smp.value.imag()).field(std::norm(smp.value));
    w.end_row();
  }
}

inline void cmd_map(const CliConfig& c, std::ostream& os) {
  const ModelParams params = c.params();
  if (c.geometries.size() != 1) fail(ErrorKind::InvalidArgument, "map takes exactly one of tl, sl, ll");
  const GeometryKind g = c.geometries.front();
  const Covector a = covector_for(g);
  const TwoMomentum q{c.E, c.p};
  const TwoMomentum pi = deformed_map(q, a, params);
  const double denom = map_denominator(q, a, params);

  csv::Writer w(os, c.separator());
  w.comment("dsr-osc map");
  w.comment("omega=" + detail::num(c.Omega) + " eps=" + detail::num(c.eps) + " E=" + detail::num(c.E) +
            " p=" + detail::num(c.p) + " geometry=" + std::string(token(g)));
  w.header({"E", "p", "geometry", "pi_E", "pi_p", "denominator", "residual_sr", "residual_tl", "residual_sl",
            "residual_ll", "residual_ms"});
  w.field(c.E).field(c.p).field(token(g)).field(pi.E).field(pi.p).field(denom);
  for (auto h : kAllGeometries) {
    double r = std::nan("");
    try {
      r = casimir_residual(q, h, params);
    } catch (const Error&) {
      // Outside that geometry's domain; reported as nan.
    }
    w.field(r);
  }
  w.end_row();
}

inline std::vector<SuiteReport> run_suites(const CliConfig& c) {
  const ModelParams params = c.params();
  for (auto g : c.geometries) {
    if (g == GeometryKind::MagueijoSmolin) params.require_ms_valid();
  }
  const bool all = c.suite == "all";
  std::vector<SuiteReport> reports;
  if (all || c.suite == "isospectral") {
    const auto n_check = std::min<std::int64_t>(25, c.basis / 2);
    reports.push_back(suite_isospectral(params, c.basis, n_check, c.tol_iso));
  }
  if (all || c.suite == "grid") {
    std::vector<GeometryKind> gs;
    for (auto g : detail::ordered(c.geometries)) {
      if (g == GeometryKind::Spacelike || g == GeometryKind::Lightlike) gs.push_back(g);
    }
    if (gs.empty()) gs = {GeometryKind::Spacelike, GeometryKind::Lightlike};
    reports.push_back(suite_grid_levels(gs, c.grid_levels, params, c.grid_points, c.tol_grid));
  }
  if (all || c.suite == "branches") {
    reports.push_back(suite_branch_identities(params, c.n_max));
  }
  if (all || c.suite == "msratio") {
    reports.push_back(suite_ms_ratio(c.eps_list, params));
  }
  if (all || c.suite == "eta") {
    reports.push_back(suite_eta_structure(params, c.basis, c.gram_states, c.tol_eta, c.tol_pseudo, c.tol_quad));
  }
  return reports;
}

/// Writes the CSV report to `os` and one human-readable line per suite to `log`.
inline int cmd_verify(const CliConfig& c, std::ostream& os, std::ostream& log) {
  const auto reports = run_suites(c);
  csv::Writer w(os, c.separator());
  w.comment("dsr-osc verify suite=" + c.suite);
  w.comment("omega=" + detail::num(c.Omega) + " eps=" + detail::num(c.eps) + " basis=" + std::to_string(c.basis) +
            " grid_points=" + std::to_string(c.grid_points));
  bool ok = true;
  for (const auto& r : reports) {
    w.comment("suite=" + r.name + " status=" + (r.passed ? "PASS" : "FAIL") + " worst=" +
              detail::num(r.worst_residual) + " tol=" + detail::num(r.tolerance) + " params: " + r.parameters);
  }
  w.header({"suite", "kind", "name", "value", "tolerance", "status"});
  for (const auto& r : reports) {
    ok = ok && r.passed;
    w.field(r.name).field("suite").field(r.name).field(r.worst_residual).field(r.tolerance)
        .field(r.passed ? "PASS" : "FAIL");
    w.end_row();
    for (const auto& chk : r.checks) {
      w.field(r.name).field("check").field(chk.name).field(chk.residual).field(chk.tolerance)
          .field(chk.passed ? "PASS" : "FAIL");
      w.end_row();
    }
    for (const auto& [key, value] : r.metrics) {
      w.field(r.name).field("metric").field(key).field(value).field("").field("");
      w.end_row();
    }
    log << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " worst=" << detail::num(r.worst_residual)
        << " tol=" << detail::num(r.tolerance) << " runtime=" << detail::num(r.runtime_seconds) << "s ("
        << r.parameters << ")\n";
  }
  return ok ? kOk : kVerificationFailed;
}

namespace detail {

inline double to_number(const std::string& s, std::string_view what) {
  const auto v = csv::parse_number(s);
  if (!v) fail(ErrorKind::InvalidArgument, "cannot parse " + std::string(what) + " '" + s + "'");
  return *v;
}

template <typename Int>
Int to_integer(const std::string& s, std::string_view what) {
  const auto v = csv::parse_integer<Int>(s);
  if (!v) fail(ErrorKind::InvalidArgument, "cannot parse " + std::string(what) + " '" + s + "'");
  return *v;
}

inline std::vector<GeometryKind> to_geometries(const std::string& s) {
  std::vector<GeometryKind> out;
  for (auto tok : csv::split(s, ',')) {
    const auto g = parse_geometry(tok);
    if (!g) fail(ErrorKind::InvalidArgument, "unknown geometry '" + std::string(tok) + "'");
    out.push_back(*g);
  }
  return out;
}

inline OutputFormat to_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "tsv") return OutputFormat::Tsv;
  fail(ErrorKind::InvalidArgument, "format must be csv or tsv, got '" + std::string(s) + "'");
}

}  // namespace detail

/// Parses `args` (without the program name), dispatches, and returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Klein-Gordon oscillator spectra under deformed dispersion relations", "dsr-osc"};
  app.require_subcommand(1);

  struct Raw {
    std::string omega, eps, nmax, basis, geometries, geometry, n, xmin, xmax, points, suite, eps_list,
        grid_points, grid_levels, states, tol_iso, tol_grid, tol_eta, tol_pseudo, tol_quad, E, p, out, format;
  } raw;

  auto common = [&raw](CLI::App* sub) {
    sub->add_option("--omega", raw.omega, "Omega = omega/m (default 0.10)");
    sub->add_option("--eps", raw.eps, "eps = m/E_p (default 0.20)");
    sub->add_option("--out", raw.out, "output path (default stdout)");
    sub->add_option("--format", raw.format, "csv or tsv");
  };

  auto* spectrum = app.add_subcommand("spectrum", "both energy branches per level and geometry");
  auto* shifts = app.add_subcommand("shifts", "positive-branch shifts relative to SR");
  auto* wave = app.add_subcommand("wavefunction", "sample an eigenfunction on a grid");
  auto* verify = app.add_subcommand("verify", "run oracle suites");
  auto* map = app.add_subcommand("map", "evaluate the nonlinear momentum map at (E, p)");
  for (auto* sub : {spectrum, shifts, wave, verify, map}) common(sub);
  for (auto* sub : {spectrum, shifts, verify}) {
    sub->add_option("--nmax", raw.nmax, "highest level (default 25)");
    sub->add_option("--geometries", raw.geometries, "comma list of sr,tl,sl,ll,ms");
  }
  wave->add_option("--geometry", raw.geometry, "sr, tl, sl or ll (default sl)");
  wave->add_option("--n", raw.n, "level, <= 64");
  wave->add_option("--xmin", raw.xmin, "grid start (default -8/sqrt(Omega))");
  wave->add_option("--xmax", raw.xmax, "grid end (default +8/sqrt(Omega))");
  wave->add_option("--points", raw.points, "grid points (default 2001)");
  verify->add_option("--suite", raw.suite, "isospectral, grid, branches, msratio, eta or all");
  verify->add_option("--basis", raw.basis, "truncated basis dimension N (default 128)");
  verify->add_option("--eps-list", raw.eps_list, "comma list of eps for msratio");
  verify->add_option("--grid-points", raw.grid_points, "grid points for the grid suite (default 4001)");
  verify->add_option("--grid-levels", raw.grid_levels, "highest level for the grid suite (default 3)");
  verify->add_option("--states", raw.states, "eta-Gram block size M (default 8)");
  verify->add_option("--tol-iso", raw.tol_iso, "isospectral tolerance (default 1e-8)");
  verify->add_option("--tol-grid", raw.tol_grid, "grid residual tolerance (default 1e-5)");
  verify->add_option("--tol-eta", raw.tol_eta, "eta-Gram tolerance (default 1e-8)");
  verify->add_option("--tol-pseudo", raw.tol_pseudo, "pseudo-Hermiticity tolerance (default 1e-6)");
  verify->add_option("--tol-quad", raw.tol_quad, "quadrature-vs-matrix tolerance (default 1e-7)");
  map->add_option("--E", raw.E, "energy in units of m");
  map->add_option("--p", raw.p, "momentum in units of m");
  map->add_option("--geometry", raw.geometry, "tl, sl or ll (default tl)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CliConfig c;
  try {
    c.subcommand = app.get_subcommands().front()->get_name();
    if (const char* env = std::getenv(std::string(kFormatEnv).c_str()); env != nullptr && *env != '\0') {
      c.format = detail::to_format(env);
    }
    if (!raw.format.empty()) c.format = detail::to_format(raw.format);
    if (!raw.omega.empty()) c.Omega = detail::to_number(raw.omega, "--omega");
    if (!raw.eps.empty()) c.eps = detail::to_number(raw.eps, "--eps");
    if (!raw.nmax.empty()) c.n_max = detail::to_integer<std::uint64_t>(raw.nmax, "--nmax");
    if (!raw.basis.empty()) c.basis = detail::to_integer<std::int64_t>(raw.basis, "--basis");
    if (!raw.geometries.empty()) c.geometries = detail::to_geometries(raw.geometries);
    if (!raw.geometry.empty()) {
      const auto gs = detail::to_geometries(raw.geometry);
      if (gs.size() != 1) fail(ErrorKind::InvalidArgument, "--geometry takes a single value");
      c.geometry = gs.front();
    }
    if (!raw.n.empty()) c.level = detail::to_integer<std::uint32_t>(raw.n, "--n");
    if (!raw.xmin.empty()) c.x_min = detail::to_number(raw.xmin, "--xmin");
    if (!raw.xmax.empty()) c.x_max = detail::to_number(raw.xmax, "--xmax");
    if (!raw.points.empty()) c.points = detail::to_integer<std::size_t>(raw.points, "--points");
    if (!raw.suite.empty()) c.suite = raw.suite;
    if (!raw.eps_list.empty()) {
      c.eps_list.clear();
      for (auto tok : csv::split(raw.eps_list, ',')) c.eps_list.push_back(detail::to_number(std::string(tok), "--eps-list"));
    }
    if (!raw.grid_points.empty()) c.grid_points = detail::to_integer<std::size_t>(raw.grid_points, "--grid-points");
    if (!raw.grid_levels.empty()) c.grid_levels = detail::to_integer<std::uint32_t>(raw.grid_levels, "--grid-levels");
    if (!raw.states.empty()) c.gram_states = detail::to_integer<std::int64_t>(raw.states, "--states");
    if (!raw.tol_iso.empty()) c.tol_iso = detail::to_number(raw.tol_iso, "--tol-iso");
    if (!raw.tol_grid.empty()) c.tol_grid = detail::to_number(raw.tol_grid, "--tol-grid");
    if (!raw.tol_eta.empty()) c.tol_eta = detail::to_number(raw.tol_eta, "--tol-eta");
    if (!raw.tol_pseudo.empty()) c.tol_pseudo = detail::to_number(raw.tol_pseudo, "--tol-pseudo");
    if (!raw.tol_quad.empty()) c.tol_quad = detail::to_number(raw.tol_quad, "--tol-quad");
    if (!raw.E.empty()) c.E = detail::to_number(raw.E, "--E");
    if (!raw.p.empty()) c.p = detail::to_number(raw.p, "--p");
    c.out_path = raw.out;

    if (c.subcommand == "map") {
      c.geometries = {raw.geometry.empty() ? GeometryKind::Timelike : c.geometry};
    }
    if (c.subcommand == "verify") {
      const std::vector<std::string> suites{"isospectral", "grid", "branches", "msratio", "eta", "all"};
      if (std::find(suites.begin(), suites.end(), c.suite) == suites.end()) {
        fail(ErrorKind::InvalidArgument, "unknown suite '" + c.suite + "'");
      }
      if (c.basis < 4) fail(ErrorKind::InvalidArgument, "--basis must be >= 4");
    }
    (void)c.params();  // validates Omega and eps
  } catch (const Error& e) {
    err << "dsr-osc: " << e.what() << '\n';
    return kUsage;
  }

  std::ostringstream buffer;
  int code = kOk;
  try {
    const ModelParams params = c.params();
    const DeformationShifts s = deformation_shifts(params);
    if (s.delta * std::sqrt(params.m_omega()) > 2.0 &&
        (c.subcommand == "verify" || (c.subcommand == "wavefunction"))) {
      err << "dsr-osc: warning: delta*sqrt(m omega) = " << detail::num(s.delta * std::sqrt(params.m_omega()))
          << " > 2; truncated-basis and shifted-state results need a larger basis or looser tolerances\n";
    }
    if (c.subcommand == "spectrum") {
      cmd_spectrum(c, buffer);
    } else if (c.subcommand == "shifts") {
      cmd_shifts(c, buffer);
    } else if (c.subcommand == "wavefunction") {
      cmd_wavefunction(c, buffer);
    } else if (c.subcommand == "map") {
      cmd_map(c, buffer);
    } else {
      code = cmd_verify(c, buffer, err);
    }
  } catch (const Error& e) {
    err << "dsr-osc: " << e.what() << '\n';
    return e.is_model_error() ? kModel : kUsage;
  }

  if (c.out_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(c.out_path, std::ios::binary);
    if (!file) {
      err << "dsr-osc: cannot open '" << c.out_path << "' for writing\n";
      return kUsage;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace dsrosc::cli

#endif
