#pragma once

// Radial reduction of -Delta + k/|x|^2 on the P-sector.
//
// Writing u = f(rho) P(w) and g = rho^{(N-1)/2} f turns the sector operator
// into -g'' + c g / rho^2 on the plain line measure, with
//     c = l(N-2+l) + k + (N-1)(N-3)/4.
// The form is nonnegative iff c >= -1/4, which is the same statement as
// l(N-2+l) >= -(N-2)^2/4 - k.

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hardyspec/harmonics.hpp"

namespace hardyspec::radial {

using harmonics::Dimension;

struct RadialProblem {
  Dimension N;
  int degree;
  double k;
  double coupling;
};

/// Validates N >= 2, degree >= 0, finite k, and fills the effective coupling.
RadialProblem make_problem(Dimension N, int degree, double k);

double effective_coupling(int N, int degree, double k);

/// l(N-2+l) >= -(N-2)^2/4 - k.
bool condition_holds(int N, int degree, double k);

/// Smallest l >= 0 with condition_holds(N, l, k).
int minimal_degree(int N, double k);

/// Lower bounds on k from the four regimes; theorem1 is -infinity.
struct RegimeThresholds {
  double friedrichs;    // -(N-2)^2/4
  double essential_sa;  // -(N-2)^2/4 + 1
  double quadrant;      // -N/4
  double theorem1;
};

RegimeThresholds regime_thresholds(int N);

enum class Spacing { LogUniform, Uniform };

/// n interior nodes on (inner, outer); node j = 1..n sits at
/// inner (outer/inner)^{j/(n+1)} (LogUniform) or inner + j (outer-inner)/(n+1)
/// (Uniform). Uniform grids may start at inner = 0.
struct GridSpec {
  double inner;
  double outer;
  int points;
  Spacing spacing;
};

/// Throws DomainError unless n >= 16, inner < outer < infinity, and
/// inner > 0 (LogUniform) or inner >= 0 (Uniform).
GridSpec make_grid(double inner, double outer, int points, Spacing spacing);

std::vector<double> grid_nodes(const GridSpec& grid);

/// Symmetric tridiagonal matrix: diag (n), off (n-1).
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

/// Dirichlet discretization of -g'' + c g/rho^2 on (inner, outer).
///
/// Uniform: diag_j = 2/h^2 + c/rho_j^2, off = -1/h^2.
/// LogUniform: with rho = e^t and g = sqrt(rho) w the form becomes
/// int w_t^2 + (c + 1/4) w^2 dt against the mass e^{2t} dt; the uniform
/// second difference in t, symmetrized by the mass, gives
///     diag_j = (2/h^2 + 1/4 + c) / rho_j^2,   off_j = -1 / (h^2 rho_j rho_{j+1}).
/// This keeps the matrix positive definite exactly when c >= -1/4.
Tridiagonal assemble(double coupling, const GridSpec& grid);
Tridiagonal assemble(const RadialProblem& problem, const GridSpec& grid);

/// Lowest `count` eigenvalues, ascending, by multisection with Sturm counts:
/// each eigenvalue is bracketed to width <= 1e-10 max(1, |lambda|).
/// Throws DomainError if count is not in [1, n], NumericalError if the
/// iteration cap is reached.
std::vector<double> lowest_eigenvalues(const Tridiagonal& matrix, int count);

/// Number of eigenvalues strictly below x.
long eigenvalues_below(const Tridiagonal& matrix, double x);

struct SpectrumResult {
  std::vector<double> eigenvalues;
  GridSpec grid;
  RadialProblem problem;
  bool sturm_counts_verified;
};

/// Assembles, solves, and re-checks every returned value against Sturm
/// counts just below and above it.
SpectrumResult solve_spectrum(const RadialProblem& problem, const GridSpec& grid, int count);

/// Artifact constants of the fall-to-center classifier.
inline constexpr double kUnboundedThreshold = -1e3;
inline constexpr double kBoundedTolerance = 1e-8;

enum class Classification { Bounded, Unbounded, Inconclusive };

const char* classification_name(Classification c);

struct ScanRow {
  double epsilon;
  double lambda_min;
};

struct FallToCenterReport {
  RadialProblem problem;
  double outer;
  int points;
  std::vector<ScanRow> rows;
  Classification classification;
  bool condition;
  /// classification agrees with condition_holds (Inconclusive never agrees).
  bool consistent;
};

/// Lowest truncated eigenvalue on LogUniform grids (eps, R) for each eps.
/// Bounded: every lambda_min >= -kBoundedTolerance. Unbounded: lambda_min
/// strictly decreasing along eps_list and the last value < kUnboundedThreshold.
/// Throws DomainError unless eps_list is nonempty, strictly decreasing,
/// positive, and below R.
FallToCenterReport fall_to_center_scan(const RadialProblem& problem, std::span<const double> eps_list,
                                       double R, int n);

/// CSV "epsilon,lambda_min,classification".
void write_scan_csv(std::ostream& out, const FallToCenterReport& report);

struct PhaseRow {
  double k;
  int degree;
  bool condition;
  double lambda_min;
  Classification classification;
  bool consistent;
};

/// Scan over every (k, l) pair; lambda_min is taken at the smallest epsilon.
std::vector<PhaseRow> phase_diagram(Dimension N, std::span<const double> k_values,
                                    std::span<const int> degrees, std::span<const double> eps_list,
                                    double R, int n);

/// CSV "k,ell,condition,lambda_min".
void write_phase_csv(std::ostream& out, std::span<const PhaseRow> rows);

}  // namespace hardyspec::radial
