#include "hardyspec/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hardyspec/error.hpp"
#include "hardyspec/hardy.hpp"
#include "hardyspec/io.hpp"
#include "hardyspec/radial.hpp"

namespace hardyspec::cli {

namespace {

using harmonics::HarmonicSpec;

// Accepted relative deviation in hardy-verify and psi-check.
constexpr double kSweepGapTolerance = 1e-6;
constexpr double kPsiResidualTolerance = 1e-5;
constexpr double kRatioLow = 3.5;
constexpr double kRatioHigh = 4.5;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                     : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) throw DomainError("empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw DomainError("not a finite number: '" + s + "'");
  }
  return v;
}

int to_int(std::string_view text) {
  const std::string_view s = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

// Minimal JSON object writer with 17-significant-digit numbers.
class JsonObject {
 public:
  JsonObject& number(std::string_view key, double v) {
    // Infinite values have no JSON number form; they are written as strings.
    return raw(key, std::isfinite(v) ? io::format_double(v) : "\"" + io::format_double(v) + "\"");
  }
  JsonObject& integer(std::string_view key, long v) { return raw(key, std::to_string(v)); }
  JsonObject& boolean(std::string_view key, bool v) { return raw(key, v ? "true" : "false"); }
  JsonObject& string(std::string_view key, std::string_view v) {
    return raw(key, nlohmann::json(std::string(v)).dump());
  }
  std::string str() const { return "{" + body_ + "}"; }

 private:
  JsonObject& raw(std::string_view key, const std::string& value) {
    if (!body_.empty()) body_ += ',';
    body_ += '"';
    body_ += key;
    body_ += "\":";
    body_ += value;
    return *this;
  }
  std::string body_;
};

struct RunConfig {
  int N = 3;
  int ell = 0;
  double k = 0.0;
  std::string family = "zonal";
  std::optional<std::string> polynomial;
  std::string bump = "mollifier";
  std::string m_list = "1,2,4,8,16,32";
  std::string eps_list = "1e-1,1e-2,1e-3";
  std::string k_range = "-20:5:0.25";
  std::string ell_range = "0:8";
  double eps = 1e-4;
  double R = 100.0;
  int n = 4000;
  int count = 5;
  std::string spacing = "log";
  std::optional<double> h;
  double residual_h = 1e-3;
  int points = 50;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
  std::optional<std::string> json_out;
};

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      return std::filesystem::path(dir) / p;
    }
  }
  return p;
}

// Writes to --out when given, else to stdout.
void emit(const std::optional<std::string>& path, const std::string& contents, std::ostream& out) {
  if (path) {
    io::write_atomically(resolve_output(*path), contents);
  } else {
    out << contents;
  }
}

hardy::BumpKind parse_bump(std::string_view name) {
  if (name == "mollifier") return hardy::BumpKind::Mollifier;
  if (name == "cosine") return hardy::BumpKind::CosineWindow;
  throw DomainError("unknown bump kind '" + std::string(name) + "' (mollifier, cosine)");
}

radial::Spacing parse_spacing(std::string_view name) {
  if (name == "log") return radial::Spacing::LogUniform;
  if (name == "uniform") return radial::Spacing::Uniform;
  throw DomainError("unknown spacing '" + std::string(name) + "' (log, uniform)");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

int run_thresholds(const RunConfig& cfg, std::ostream& out) {
  require(cfg.N >= 2, "--N must be >= 2");
  const radial::RegimeThresholds t = radial::regime_thresholds(cfg.N);
  JsonObject json;
  json.integer("N", cfg.N)
      .number("friedrichs", t.friedrichs)
      .number("essential_sa", t.essential_sa)
      .number("quadrant", t.quadrant)
      .number("theorem1", t.theorem1);
  emit(cfg.out, json.str() + "\n", out);
  if (cfg.out) out << json.str() << "\n";
  return kSuccess;
}

int run_min_degree(const RunConfig& cfg, std::ostream& out) {
  require(cfg.N >= 2, "--N must be >= 2");
  const int degree = radial::minimal_degree(cfg.N, cfg.k);
  JsonObject json;
  json.integer("N", cfg.N)
      .number("k", cfg.k)
      .integer("ell_min", degree)
      .number("lambda_ell", harmonics::eigenvalue_of_degree(cfg.N, degree))
      .number("sharp_constant", hardy::sharp_constant(cfg.N, degree))
      .boolean("condition_holds", radial::condition_holds(cfg.N, degree, cfg.k));
  emit(cfg.out, json.str() + "\n", out);
  if (cfg.out) out << json.str() << "\n";
  return kSuccess;
}

int run_hardy_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const HarmonicSpec spec = make_family(cfg.family, cfg.N, cfg.ell, cfg.polynomial);
  const std::vector<int> m_list = parse_int_list(cfg.m_list);
  for (const int m : m_list) require(m >= 1, "--m entries must be >= 1");
  const hardy::BumpProfile phi = hardy::make_bump(parse_bump(cfg.bump));
  const auto rows = hardy::optimality_sweep(spec, phi, m_list);
  std::ostringstream csv;
  hardy::write_sweep_csv(csv, rows);
  emit(cfg.out, csv.str(), out);
  const double bound =
      kSweepGapTolerance * (1.0 + hardy::sharp_constant(spec.dimension(), spec.degree()));
  for (const auto& row : rows) {
    if (std::abs(row.gap) > bound) {
      err << "hardy-verify: gap " << io::format_double(row.gap) << " at m=" << row.m
          << " exceeds " << io::format_double(bound) << "\n";
      return kDiagnosticFailure;
    }
  }
  return kSuccess;
}

int run_psi_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const HarmonicSpec spec = make_family(cfg.family, cfg.N, cfg.ell, cfg.polynomial);
  require(cfg.points >= 1, "--points must be >= 1");
  require(!cfg.h || (*cfg.h > 0.0 && *cfg.h < 0.1), "--step must lie in (0, 0.1)");
  require(cfg.residual_h > 0.0 && cfg.residual_h < 0.1, "--residual-step must lie in (0, 0.1)");
  const auto points = hardy::sample_off_nodal_points(spec, cfg.points, cfg.seed);
  std::ostringstream csv;
  csv << "index,radius,step,residual_coarse,residual_fine,scale,ratio,residual\n";
  bool ok = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double r2 = 0.0;
    for (const double xi : points[i]) r2 += xi * xi;
    const hardy::PsiConvergence c = cfg.h ? hardy::psi_convergence(spec, points[i], *cfg.h)
                                          : hardy::psi_convergence(spec, points[i]);
    const double residual = hardy::delta_psi_residual(spec, points[i], cfg.residual_h);
    csv << i << ',' << io::format_double(std::sqrt(r2)) << ',' << io::format_double(c.step) << ','
        << io::format_double(c.residual_coarse) << ',' << io::format_double(c.residual_fine) << ','
        << io::format_double(c.scale) << ','
        << (c.at_rounding_floor ? std::string("nan") : io::format_double(c.ratio)) << ','
        << io::format_double(residual) << '\n';
    const bool ratio_ok = c.at_rounding_floor || (c.ratio >= kRatioLow && c.ratio <= kRatioHigh);
    ok = ok && ratio_ok && residual <= kPsiResidualTolerance * c.scale;
  }
  emit(cfg.out, csv.str(), out);
  if (!ok) {
    err << "psi-check: stencil convergence outside the accepted band\n";
    return kDiagnosticFailure;
  }
  return kSuccess;
}

int run_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require(cfg.N >= 2, "--N must be >= 2");
  require(cfg.ell >= 0, "--ell must be >= 0");
  require(cfg.count >= 1 && cfg.count <= cfg.n, "--count must lie in [1, n]");
  const radial::RadialProblem problem = radial::make_problem(harmonics::Dimension(cfg.N), cfg.ell, cfg.k);
  const radial::GridSpec grid = radial::make_grid(cfg.eps, cfg.R, cfg.n, parse_spacing(cfg.spacing));
  const radial::SpectrumResult result = radial::solve_spectrum(problem, grid, cfg.count);
  std::ostringstream csv;
  csv << "index,eigenvalue\n";
  for (std::size_t j = 0; j < result.eigenvalues.size(); ++j) {
    csv << j + 1 << ',' << io::format_double(result.eigenvalues[j]) << '\n';
  }
  emit(cfg.out, csv.str(), out);
  if (!result.sturm_counts_verified) {
    err << "spectrum: Sturm-count verification failed\n";
    return kDiagnosticFailure;
  }
  return kSuccess;
}

int run_fall_to_center(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require(cfg.N >= 2, "--N must be >= 2");
  require(cfg.ell >= 0, "--ell must be >= 0");
  const radial::RadialProblem problem = radial::make_problem(harmonics::Dimension(cfg.N), cfg.ell, cfg.k);
  const std::vector<double> eps = parse_double_list(cfg.eps_list);
  const radial::FallToCenterReport report = radial::fall_to_center_scan(problem, eps, cfg.R, cfg.n);
  std::ostringstream csv;
  radial::write_scan_csv(csv, report);
  emit(cfg.out, csv.str(), out);
  JsonObject summary;
  summary.string("classification", radial::classification_name(report.classification))
      .boolean("condition_holds", report.condition)
      .boolean("consistent", report.consistent);
  (cfg.out ? out : err) << summary.str() << "\n";
  if (!report.consistent) {
    err << "fall-to-center: classification disagrees with the coupling condition\n";
    return kDiagnosticFailure;
  }
  return kSuccess;
}

int run_phase_diagram(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require(cfg.N >= 2, "--N must be >= 2");
  const std::vector<double> ks = parse_double_range(cfg.k_range);
  const std::vector<int> degrees = parse_int_range(cfg.ell_range);
  for (const int d : degrees) require(d >= 0, "--ell-range entries must be >= 0");
  const std::vector<double> eps = parse_double_list(cfg.eps_list);
  const auto rows = radial::phase_diagram(harmonics::Dimension(cfg.N), ks, degrees, eps, cfg.R, cfg.n);
  std::ostringstream csv;
  radial::write_phase_csv(csv, rows);
  emit(cfg.out, csv.str(), out);
  if (cfg.json_out) {
    std::string json = "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      JsonObject row;
      row.integer("N", cfg.N)
          .integer("ell", rows[i].degree)
          .number("k", rows[i].k)
          .number("lambda_ell", harmonics::eigenvalue_of_degree(cfg.N, rows[i].degree))
          .number("sharp_constant", hardy::sharp_constant(cfg.N, rows[i].degree))
          .boolean("condition_holds", rows[i].condition);
      json += "  " + row.str() + (i + 1 < rows.size() ? ",\n" : "\n");
    }
    json += "]\n";
    io::write_atomically(resolve_output(*cfg.json_out), json);
  }
  for (const auto& row : rows) {
    if (!row.consistent) {
      err << "phase-diagram: classification disagrees with the coupling condition at k="
          << io::format_double(row.k) << ", ell=" << row.degree << "\n";
      return kDiagnosticFailure;
    }
  }
  return kSuccess;
}

}  // namespace

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> values;
  for (const std::string_view part : split(text, ',')) values.push_back(to_double(part));
  return values;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> values;
  for (const std::string_view part : split(text, ',')) values.push_back(to_int(part));
  return values;
}

std::vector<double> parse_double_range(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw DomainError("range must have the form start:stop:step");
  const double start = to_double(parts[0]);
  const double stop = to_double(parts[1]);
  const double step = to_double(parts[2]);
  if (!(step > 0.0) || stop < start) throw DomainError("range needs step > 0 and start <= stop");
  const double span = (stop - start) / step;
  if (span > 1e6) throw DomainError("range has too many entries");
  const auto steps = static_cast<long>(std::floor(span + 1e-9));
  std::vector<double> values;
  for (long i = 0; i <= steps; ++i) values.push_back(start + static_cast<double>(i) * step);
  return values;
}

std::vector<int> parse_int_range(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2 && parts.size() != 3) {
    throw DomainError("integer range must have the form start:stop[:step]");
  }
  const int start = to_int(parts[0]);
  const int stop = to_int(parts[1]);
  const int step = parts.size() == 3 ? to_int(parts[2]) : 1;
  if (step <= 0 || stop < start) throw DomainError("range needs step > 0 and start <= stop");
  std::vector<int> values;
  for (int v = start; v <= stop; v += step) values.push_back(v);
  return values;
}

std::vector<harmonics::Monomial> parse_polynomial(std::string_view text) {
  text = trim(text);
  std::vector<harmonics::Monomial> terms;
  if (!text.empty() && text.front() == '[') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw DomainError(std::string("polynomial JSON: ") + e.what());
    }
    if (!doc.is_array()) throw DomainError("polynomial JSON must be an array");
    for (const auto& item : doc) {
      if (!item.is_object() || !item.contains("exponents") || !item.contains("coefficient")) {
        throw DomainError("polynomial JSON terms need \"exponents\" and \"coefficient\"");
      }
      try {
        terms.push_back({item.at("exponents").get<std::vector<int>>(),
                         item.at("coefficient").get<double>()});
      } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("polynomial JSON: ") + e.what());
      }
    }
  } else {
    for (const std::string_view term : split(text, ';')) {
      const std::string_view t = trim(term);
      if (t.empty()) continue;
      const auto colon = t.find(':');
      if (colon == std::string_view::npos) {
        throw DomainError("polynomial term must have the form e1,...,eN:coefficient");
      }
      terms.push_back({parse_int_list(t.substr(0, colon)), to_double(t.substr(colon + 1))});
    }
  }
  if (terms.empty()) throw DomainError("polynomial has no terms");
  return terms;
}

HarmonicSpec make_family(std::string_view family, int N, int degree,
                         const std::optional<std::string>& polynomial) {
  const harmonics::Dimension dim(N);
  if (family == "zonal") return harmonics::make_zonal(dim, degree);
  if (family == "planar-cos" || family == "planar-sin") {
    if (N != 2) throw DomainError("planar harmonics exist only for N = 2");
    return harmonics::make_planar(degree,
                                  family == "planar-cos" ? harmonics::Parity::Cos : harmonics::Parity::Sin);
  }
  if (family == "product") return harmonics::make_product(dim);
  if (family == "poly") {
    if (!polynomial) throw DomainError("--family poly requires --poly");
    std::string text = *polynomial;
    if (!text.empty() && text.front() == '@') {
      std::ifstream in(text.substr(1));
      if (!in) throw DomainError("cannot read polynomial file " + text.substr(1));
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    return harmonics::make_polynomial(dim, parse_polynomial(text));
  }
  throw DomainError("unknown harmonic family '" + std::string(family) +
                    "' (zonal, planar-cos, planar-sin, product, poly)");
}

int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sharp Hardy constants and inverse-square spectra restricted to harmonic sectors",
               "hardyspec"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_harmonic = [&cfg](CLI::App* sub) {
    sub->add_option("--N", cfg.N, "Dimension N >= 2")->required();
    sub->add_option("--ell", cfg.ell, "Degree of the harmonic (ignored for product)");
    sub->add_option("--family", cfg.family, "zonal | planar-cos | planar-sin | product | poly");
    sub->add_option("--poly", cfg.polynomial,
                    "Polynomial terms 'e1,..,eN:c;...', a JSON array, or @file");
  };
  auto add_radial = [&cfg](CLI::App* sub) {
    sub->add_option("--N", cfg.N, "Dimension N >= 2")->required();
    sub->add_option("--ell", cfg.ell, "Degree l >= 0");
    sub->add_option("--k", cfg.k, "Coupling k of k/|x|^2");
    sub->add_option("--R", cfg.R, "Outer radius");
    sub->add_option("--n", cfg.n, "Interior grid points");
  };
  auto add_out = [&cfg](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output file (stdout if omitted)");
  };

  CLI::App* thresholds = app.add_subcommand("thresholds", "Lower bounds of k per regime");
  thresholds->add_option("--N", cfg.N, "Dimension N >= 2")->required();
  add_out(thresholds);

  CLI::App* min_degree = app.add_subcommand("min-degree", "Smallest admissible degree for k");
  min_degree->add_option("--N", cfg.N, "Dimension N >= 2")->required();
  min_degree->add_option("--k", cfg.k, "Coupling k")->required();
  add_out(min_degree);

  CLI::App* hardy_verify = app.add_subcommand("hardy-verify", "Optimality sweep along u_m");
  add_harmonic(hardy_verify);
  hardy_verify->add_option("--m", cfg.m_list, "Comma-separated m values");
  hardy_verify->add_option("--bump", cfg.bump, "mollifier | cosine");
  add_out(hardy_verify);

  CLI::App* psi_check = app.add_subcommand("psi-check", "Delta psi identity residuals");
  add_harmonic(psi_check);
  psi_check->add_option("--points", cfg.points, "Number of random off-nodal points");
  psi_check->add_option("--step", cfg.h,
                        "Fine stencil step h for the ratio (residuals at 2h and h); chosen per point if omitted");
  psi_check->add_option("--residual-step", cfg.residual_h, "Stencil step for the reported residual");
  psi_check->add_option("--seed", cfg.seed, "64-bit seed");
  add_out(psi_check);

  CLI::App* spectrum = app.add_subcommand("spectrum", "Lowest truncated eigenvalues");
  add_radial(spectrum);
  spectrum->add_option("--eps", cfg.eps, "Inner radius");
  spectrum->add_option("--count", cfg.count, "Number of eigenvalues");
  spectrum->add_option("--spacing", cfg.spacing, "log | uniform");
  add_out(spectrum);

  CLI::App* fall = app.add_subcommand("fall-to-center", "Scan lambda_min as the cutoff shrinks");
  add_radial(fall);
  fall->add_option("--eps", cfg.eps_list, "Strictly decreasing comma-separated cutoffs");
  add_out(fall);

  CLI::App* phase = app.add_subcommand("phase-diagram", "Condition and lambda_min over (k, l)");
  phase->add_option("--N", cfg.N, "Dimension N >= 2")->required();
  phase->add_option("--k-range", cfg.k_range, "start:stop:step");
  phase->add_option("--ell-range", cfg.ell_range, "start:stop[:step]");
  phase->add_option("--eps", cfg.eps_list, "Strictly decreasing comma-separated cutoffs");
  phase->add_option("--R", cfg.R, "Outer radius");
  phase->add_option("--n", cfg.n, "Interior grid points");
  add_out(phase);
  phase->add_option("--json-out", cfg.json_out, "JSON rows output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInvalidArguments;
  }

  try {
    if (thresholds->parsed()) return run_thresholds(cfg, out);
    if (min_degree->parsed()) return run_min_degree(cfg, out);
    if (hardy_verify->parsed()) return run_hardy_verify(cfg, out, err);
    if (psi_check->parsed()) return run_psi_check(cfg, out, err);
    if (spectrum->parsed()) return run_spectrum(cfg, out, err);
    if (fall->parsed()) return run_fall_to_center(cfg, out, err);
    if (phase->parsed()) return run_phase_diagram(cfg, out, err);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidArguments;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << " (best estimate "
        << io::format_double(e.best_estimate()) << ")\n";
    return kDiagnosticFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDiagnosticFailure;
  }
  return kInvalidArguments;
}

}  // namespace hardyspec::cli
