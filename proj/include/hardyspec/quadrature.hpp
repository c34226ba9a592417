#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>

namespace hardyspec::quadrature {

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

/// Adaptive composite Gauss-Legendre integration of f over [a, b].
///
/// Each panel is integrated with the 15-point rule (exact for polynomials of
/// degree <= 29). The error of a panel is estimated as the difference between
/// its one-panel value and the sum over its two halves; the panel with the
/// largest estimate is bisected until the total estimate is <= tol.
/// Accepted panels are summed left to right, so results are reproducible.
///
/// Throws DomainError for a >= b or tol <= 0, NumericalError if the panel
/// budget is exhausted (the exception carries the best estimate reached).
IntegralResult integrate_line(const std::function<double(double)>& f, double a, double b,
                              double tol);

/// Nodes and weights of the 15-point rule on [-1, 1].
std::span<const double> gauss_legendre_nodes();
std::span<const double> gauss_legendre_weights();

/// log Gamma(x) for x > 0 (Lanczos approximation, g = 7, 9 terms).
double log_gamma(double x);

/// Surface area of the unit sphere S^{N-1} in R^N: 2 pi^{N/2} / Gamma(N/2).
double sphere_surface_area(int N);

/// Pinned generator for every sampled quantity in the project:
/// std::mt19937_64 seeded with the raw 64-bit seed. Uniforms take the top 53
/// bits; normals use the Box-Muller transform on pairs of uniforms, so the
/// stream does not depend on the standard library's distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo estimate of the surface integral of f over S^{N-1}: points are
/// normalized standard Gaussian vectors, the sample mean is scaled by
/// sphere_surface_area(N). Deterministic for a fixed seed.
MonteCarloEstimate integrate_sphere_mc(const std::function<double(std::span<const double>)>& f,
                                       int N, long samples, std::uint64_t seed);

}  // namespace hardyspec::quadrature
