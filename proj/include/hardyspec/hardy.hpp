#pragma once

// Sharp Hardy-type inequality on the complement of the nodal cone of P.
//
// For u = f(|x|) P(x/|x|) the Rayleigh quotient
//     int |grad u|^2 dx / int |u|^2 / |x|^2 dx
// is bounded below by ((N-2)/2)^2 + l(N-2+l), and the family
//     u_m(x) = m^{-1/2} phi(log|x| / m) |x|^{1-N/2} P(x/|x|)
// drives it down to that value at the rate ||phi'||^2 / m^2.
//
// Radial integrals are evaluated in s = log(rho), where the u_m integrands
// become phi(s/m)-shaped and the origin singularity disappears.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hardyspec/harmonics.hpp"

namespace hardyspec::hardy {

/// Absolute tolerance requested for every one-dimensional integral (tightened
/// proportionally for integrals whose magnitude is below one, and never below
/// 1e-13 of the magnitude).
inline constexpr double kIntegralTolerance = 1e-9;

enum class BumpKind { Mollifier, CosineWindow };

/// Normalized profile phi supported in [-1, 1].
class BumpProfile {
 public:
  BumpKind kind() const noexcept { return kind_; }
  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;
  /// ||phi||_{L2(R)}, 1 up to quadrature error.
  double l2_norm() const noexcept { return l2_norm_; }
  /// ||phi'||^2_{L2(R)}.
  double derivative_energy() const noexcept { return derivative_energy_; }
  double normalization() const noexcept { return normalization_; }

 private:
  friend BumpProfile make_bump(BumpKind kind);
  BumpKind kind_ = BumpKind::Mollifier;
  double normalization_ = 1.0;
  double l2_norm_ = 0.0;
  double derivative_energy_ = 0.0;
};

/// Mollifier: c exp(-1/(1-t^2)); CosineWindow: c cos^2(pi t / 2). The constant
/// c and ||phi'||^2 are computed by quadrature.
BumpProfile make_bump(BumpKind kind);

/// Radial profile f with derivative, supported in [inner, outer].
struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double inner;
  double outer;
};

/// u(x) = f(|x|) P(x/|x|) with 0 < inner < outer < infinity.
class SeparableTestFunction {
 public:
  /// Throws DomainError for an invalid support, a profile that is nonzero or
  /// non-finite at the support ends, or f identically zero.
  SeparableTestFunction(RadialProfile profile, harmonics::HarmonicSpec angular, std::string label);

  const RadialProfile& radial() const noexcept { return profile_; }
  const harmonics::HarmonicSpec& angular() const noexcept { return angular_; }
  const std::string& label() const noexcept { return label_; }

  /// u(x) evaluated pointwise; zero outside the radial support.
  double operator()(std::span<const double> x) const;

 private:
  RadialProfile profile_;
  harmonics::HarmonicSpec angular_;
  std::string label_;
};

/// |x|^{1-N/2} P(x/|x|). Throws DomainError at x = 0.
double weight_psi(const harmonics::HarmonicSpec& spec, std::span<const double> x);

/// |Delta_h psi(x) + C psi(x)/|x|^2| with C = sharp_constant, using the
/// (2N+1)-point central-difference Laplacian. Throws DomainError at x = 0 or
/// when h >= |x|/2.
double delta_psi_residual(const harmonics::HarmonicSpec& spec, std::span<const double> x, double h);

/// Stencil convergence of the Delta psi identity at one point.
struct PsiConvergence {
  double residual_coarse;  // at step 2h
  double residual_fine;    // at step h
  /// (1 + C) |x|^{-1-N/2} ||P|| / sqrt(|S^{N-1}|): size of the terms in the identity.
  double scale;
  /// residual_coarse / residual_fine; 4 for a second-order stencil.
  double ratio;
  /// Both residuals below 1e-9 scale: the stencil is exact up to rounding
  /// (e.g. psi constant) and the ratio carries no information.
  bool at_rounding_floor;
  double step;  // h
};

PsiConvergence psi_convergence(const harmonics::HarmonicSpec& spec, std::span<const double> x,
                               double h);

/// Same, with h the smallest of 2e-2, 1e-2, 5e-3, ... whose residual stays
/// a hundred times above the cancellation error of the stencil. Where the
/// leading error term nearly vanishes, larger steps are polluted by the h^4
/// term and smaller ones by rounding. at_rounding_floor is set when even the
/// largest step is unresolved.
PsiConvergence psi_convergence(const harmonics::HarmonicSpec& spec, std::span<const double> x);

/// `count` points with |x| uniform in [0.5, 2] and directions uniform on the
/// sphere, rejecting directions where |P| is below 10% of its RMS value.
std::vector<std::vector<double>> sample_off_nodal_points(const harmonics::HarmonicSpec& spec,
                                                         int count, std::uint64_t seed);

/// ((N-2)/2)^2 + l(N-2+l).
double sharp_constant(int N, int degree);

/// u_m for the normalized version of spec; support [e^{-m}, e^{m}].
SeparableTestFunction minimizer_element(const harmonics::HarmonicSpec& spec, const BumpProfile& phi,
                                        int m);

/// Closed form of Delta u_m away from the origin:
///   m^{-5/2} phi''(log|x|/m) psi(x)/|x|^2 - C u_m(x)/|x|^2,
/// with psi built from the normalized spec.
double minimizer_laplacian(const harmonics::HarmonicSpec& spec, const BumpProfile& phi, int m,
                           std::span<const double> x);

/// int |u|^2/|x|^2 dx = ||P||^2 int f^2 rho^{N-3} d rho.
double weighted_l2_norm_sq(const SeparableTestFunction& u);

/// int |grad u|^2 dx = ||P||^2 int (f'^2 + lambda f^2 / rho^2) rho^{N-1} d rho.
double dirichlet_energy(const SeparableTestFunction& u);

/// dirichlet_energy / weighted_l2_norm_sq. Throws DomainError on a zero
/// denominator.
double rayleigh_quotient(const SeparableTestFunction& u);

/// <H u, u> = dirichlet_energy(u) + k weighted_l2_norm_sq(u).
double form_value(const SeparableTestFunction& u, double k);

/// u(sigma x), sigma > 0.
SeparableTestFunction rescaled(const SeparableTestFunction& u, double sigma);

/// Random smooth compactly supported test function with angular part spec.
/// The radial profile is a C^1 window times a random Chebyshev series in
/// log(rho), times a random power of rho, scaled to unit weighted norm.
SeparableTestFunction random_test_function(const harmonics::HarmonicSpec& spec,
                                           std::uint64_t seed);

struct OptimalitySweepRow {
  int m;
  double rayleigh;
  double predicted;
  double gap;
};

/// One row per m: rayleigh_quotient(u_m) against sharp_constant + ||phi'||^2/m^2.
std::vector<OptimalitySweepRow> optimality_sweep(const harmonics::HarmonicSpec& spec,
                                                 const BumpProfile& phi, std::span<const int> m_list);

/// CSV with header "m,rayleigh,predicted,gap", 17 significant digits.
void write_sweep_csv(std::ostream& out, std::span<const OptimalitySweepRow> rows);

}  // namespace hardyspec::hardy
