#include "hardyspec/radial.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <ostream>

#include "hardyspec/error.hpp"
#include "hardyspec/io.hpp"
#include "hardyspec/kernels.hpp"

namespace hardyspec::radial {

namespace {

constexpr int kMaxMultisectionSteps = 600;
constexpr double kRelativeWidth = 1e-10;

double pivot_floor(std::span<const double> off_sq) {
  double largest = 1.0;
  for (const double e : off_sq) largest = std::max(largest, e);
  return DBL_MIN * largest;
}

std::vector<double> squared(std::span<const double> off) {
  std::vector<double> out(off.size());
  for (std::size_t i = 0; i < off.size(); ++i) out[i] = off[i] * off[i];
  return out;
}

double width_target(double lo, double hi) {
  return kRelativeWidth * std::max(1.0, std::min(std::abs(lo), std::abs(hi)));
}

}  // namespace

RadialProblem make_problem(Dimension N, int degree, double k) {
  if (degree < 0) throw DomainError("radial problem: degree must be nonnegative");
  if (!std::isfinite(k)) throw DomainError("radial problem: k must be finite");
  return {N, degree, k, effective_coupling(N, degree, k)};
}

double effective_coupling(int N, int degree, double k) {
  return harmonics::eigenvalue_of_degree(N, degree) + k + 0.25 * (N - 1) * (N - 3);
}

bool condition_holds(int N, int degree, double k) {
  const double half = 0.5 * (N - 2);
  return harmonics::eigenvalue_of_degree(N, degree) >= -half * half - k;
}

int minimal_degree(int N, double k) {
  if (N < 2) throw DomainError("minimal_degree: requires N >= 2");
  if (!std::isfinite(k)) throw DomainError("minimal_degree: k must be finite");
  int degree = 0;
  while (!condition_holds(N, degree, k)) ++degree;
  return degree;
}

RegimeThresholds regime_thresholds(int N) {
  if (N < 2) throw DomainError("regime_thresholds: requires N >= 2");
  const double half = 0.5 * (N - 2);
  return {0.0 - half * half, -half * half + 1.0, -0.25 * N, -std::numeric_limits<double>::infinity()};
}

GridSpec make_grid(double inner, double outer, int points, Spacing spacing) {
  if (points < 16) throw DomainError("grid: at least 16 points required");
  if (!(outer > inner) || !std::isfinite(outer)) {
    throw DomainError("grid: requires inner < outer < infinity");
  }
  if (spacing == Spacing::LogUniform && !(inner > 0.0)) {
    throw DomainError("grid: log-uniform spacing requires inner > 0");
  }
  if (spacing == Spacing::Uniform && !(inner >= 0.0)) {
    throw DomainError("grid: uniform spacing requires inner >= 0");
  }
  return {inner, outer, points, spacing};
}

std::vector<double> grid_nodes(const GridSpec& grid) {
  std::vector<double> nodes(static_cast<std::size_t>(grid.points));
  const double steps = grid.points + 1.0;
  if (grid.spacing == Spacing::LogUniform) {
    const double log_inner = std::log(grid.inner);
    const double h = (std::log(grid.outer) - log_inner) / steps;
    for (int j = 1; j <= grid.points; ++j) nodes[j - 1] = std::exp(log_inner + j * h);
  } else {
    const double h = (grid.outer - grid.inner) / steps;
    for (int j = 1; j <= grid.points; ++j) nodes[j - 1] = grid.inner + j * h;
  }
  return nodes;
}

Tridiagonal assemble(double coupling, const GridSpec& grid) {
  const std::vector<double> rho = grid_nodes(grid);
  const std::size_t n = rho.size();
  Tridiagonal m{std::vector<double>(n), std::vector<double>(n - 1)};
  const double steps = grid.points + 1.0;
  if (grid.spacing == Spacing::Uniform) {
    const double h = (grid.outer - grid.inner) / steps;
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t j = 0; j < n; ++j) m.diag[j] = 2.0 * inv_h2 + coupling / (rho[j] * rho[j]);
    for (std::size_t j = 0; j + 1 < n; ++j) m.off[j] = -inv_h2;
  } else {
    const double h = (std::log(grid.outer) - std::log(grid.inner)) / steps;
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t j = 0; j < n; ++j) {
      m.diag[j] = (2.0 * inv_h2 + 0.25 + coupling) / (rho[j] * rho[j]);
    }
    for (std::size_t j = 0; j + 1 < n; ++j) m.off[j] = -inv_h2 / (rho[j] * rho[j + 1]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(m.diag[j])) throw NumericalError("assemble: non-finite diagonal", 0.0, 0.0);
  }
  return m;
}

Tridiagonal assemble(const RadialProblem& problem, const GridSpec& grid) {
  return assemble(problem.coupling, grid);
}

long eigenvalues_below(const Tridiagonal& matrix, double x) {
  const std::vector<double> off_sq = squared(matrix.off);
  const kernels::ShiftBatch shifts{x, x, x, x};
  return kernels::sturm_counts(matrix.diag, off_sq, pivot_floor(off_sq), shifts)[0];
}

std::vector<double> lowest_eigenvalues(const Tridiagonal& matrix, int count) {
  const auto n = static_cast<long>(matrix.diag.size());
  if (count < 1 || count > n) throw DomainError("lowest_eigenvalues: count must be in [1, n]");
  if (matrix.off.size() + 1 != matrix.diag.size()) {
    throw DomainError("lowest_eigenvalues: malformed tridiagonal matrix");
  }
  const std::vector<double> off_sq = squared(matrix.off);
  const double pivmin = pivot_floor(off_sq);
  const kernels::SpectrumBounds bounds = kernels::gershgorin(matrix.diag, matrix.off);
  const double pad = 2.0 * DBL_EPSILON * std::max(std::abs(bounds.lower), std::abs(bounds.upper)) +
                     2.0 * pivmin;

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  double floor = bounds.lower - pad;
  for (long index = 0; index < count; ++index) {
    // Invariant: fewer than index+1 eigenvalues below lo, at least index+1 below hi.
    double lo = floor;
    double hi = bounds.upper + pad;
    int steps = 0;
    while (hi - lo > width_target(lo, hi)) {
      if (++steps > kMaxMultisectionSteps) {
        throw NumericalError("lowest_eigenvalues: multisection did not converge", 0.5 * (lo + hi),
                             hi - lo);
      }
      kernels::ShiftBatch shifts{};
      const double step = (hi - lo) / (kernels::kShiftBatch + 1);
      for (std::size_t i = 0; i < kernels::kShiftBatch; ++i) shifts[i] = lo + step * (i + 1);
      const kernels::CountBatch counts = kernels::sturm_counts(matrix.diag, off_sq, pivmin, shifts);
      double new_lo = lo;
      double new_hi = hi;
      for (std::size_t i = 0; i < kernels::kShiftBatch; ++i) {
        if (counts[i] >= index + 1) {
          new_hi = shifts[i];
          break;
        }
        new_lo = shifts[i];
      }
      if (new_lo == lo && new_hi == hi) break;  // no representable progress
      lo = new_lo;
      hi = new_hi;
    }
    const double value = 0.5 * (lo + hi);
    out.push_back(value);
    floor = lo;
  }
  return out;
}

SpectrumResult solve_spectrum(const RadialProblem& problem, const GridSpec& grid, int count) {
  const Tridiagonal matrix = assemble(problem, grid);
  std::vector<double> values = lowest_eigenvalues(matrix, count);
  bool verified = true;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double delta = 2.0 * kRelativeWidth * std::max(1.0, std::abs(values[j]));
    verified = verified && eigenvalues_below(matrix, values[j] - delta) <= static_cast<long>(j) &&
               eigenvalues_below(matrix, values[j] + delta) >= static_cast<long>(j + 1);
    if (j > 0) verified = verified && values[j] > values[j - 1];
  }
  return {std::move(values), grid, problem, verified};
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::Bounded: return "BOUNDED";
    case Classification::Unbounded: return "UNBOUNDED";
    case Classification::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

FallToCenterReport fall_to_center_scan(const RadialProblem& problem, std::span<const double> eps_list,
                                       double R, int n) {
  if (eps_list.empty()) throw DomainError("fall_to_center_scan: empty epsilon list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] < R)) {
      throw DomainError("fall_to_center_scan: every epsilon must lie in (0, R)");
    }
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw DomainError("fall_to_center_scan: epsilon list must be strictly decreasing");
    }
  }
  FallToCenterReport report{problem, R, n, {}, Classification::Inconclusive,
                            condition_holds(problem.N, problem.degree, problem.k), false};
  report.rows.reserve(eps_list.size());
  for (const double eps : eps_list) {
    const GridSpec grid = make_grid(eps, R, n, Spacing::LogUniform);
    report.rows.push_back({eps, lowest_eigenvalues(assemble(problem, grid), 1).front()});
  }

  const bool all_bounded = std::all_of(report.rows.begin(), report.rows.end(), [](const ScanRow& r) {
    return r.lambda_min >= -kBoundedTolerance;
  });
  bool decreasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    decreasing = decreasing && report.rows[i].lambda_min < report.rows[i - 1].lambda_min;
  }
  if (all_bounded) {
    report.classification = Classification::Bounded;
  } else if (decreasing && report.rows.back().lambda_min < kUnboundedThreshold) {
    report.classification = Classification::Unbounded;
  }
  report.consistent =
      (report.classification == Classification::Bounded && report.condition) ||
      (report.classification == Classification::Unbounded && !report.condition);
  return report;
}

void write_scan_csv(std::ostream& out, const FallToCenterReport& report) {
  out << "epsilon,lambda_min,classification\n";
  for (const ScanRow& row : report.rows) {
    out << io::format_double(row.epsilon) << ',' << io::format_double(row.lambda_min) << ','
        << classification_name(report.classification) << '\n';
  }
}

std::vector<PhaseRow> phase_diagram(Dimension N, std::span<const double> k_values,
                                    std::span<const int> degrees, std::span<const double> eps_list,
                                    double R, int n) {
  std::vector<PhaseRow> rows;
  rows.reserve(k_values.size() * degrees.size());
  for (const double k : k_values) {
    for (const int degree : degrees) {
      const FallToCenterReport report = fall_to_center_scan(make_problem(N, degree, k), eps_list, R, n);
      rows.push_back({k, degree, report.condition, report.rows.back().lambda_min,
                      report.classification, report.consistent});
    }
  }
  return rows;
}

void write_phase_csv(std::ostream& out, std::span<const PhaseRow> rows) {
  out << "k,ell,condition,lambda_min\n";
  for (const PhaseRow& row : rows) {
    out << io::format_double(row.k) << ',' << row.degree << ','
        << (row.condition ? "true" : "false") << ',' << io::format_double(row.lambda_min) << '\n';
  }
}

}  // namespace hardyspec::radial
