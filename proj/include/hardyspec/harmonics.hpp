#pragma once

// Eigenfunctions P of the negative Laplace-Beltrami operator on S^{N-1}.
//
// A HarmonicSpec is an immutable description of one eigenfunction together
// with its degree, eigenvalue l(N-2+l) and L2(S^{N-1}) norm. Four families
// are available:
//   Zonal(l)            Gegenbauer C_l^{(N-2)/2} of the first coordinate
//                       (Chebyshev T_l when N = 2, the alpha -> 0 limit);
//   Planar(l, parity)   cos(l theta) or sin(l theta), N = 2 only;
//   Product             x_1 x_2 ... x_N, degree N;
//   HomogeneousPoly     an explicit harmonic polynomial homogeneous of degree l.

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hardyspec::harmonics {

/// Ambient dimension N >= 2.
class Dimension {
 public:
  explicit Dimension(int n);
  int value() const noexcept { return n_; }
  operator int() const noexcept { return n_; }

 private:
  int n_;
};

/// A point on the unit sphere; construction checks | |w| - 1 | <= 1e-12.
class SpherePoint {
 public:
  explicit SpherePoint(std::vector<double> coordinates);
  /// Normalizes a nonzero vector.
  static SpherePoint from_direction(std::span<const double> x);

  std::span<const double> coordinates() const noexcept { return coordinates_; }
  int dimension() const noexcept { return static_cast<int>(coordinates_.size()); }

 private:
  std::vector<double> coordinates_;
};

enum class Parity { Cos, Sin };

struct Zonal {
  int degree;
};
struct Planar {
  int degree;
  Parity parity;
};
struct Product {};
struct Monomial {
  std::vector<int> exponents;
  double coefficient;
};
struct HomogeneousPoly {
  std::vector<Monomial> terms;
};

using Family = std::variant<Zonal, Planar, Product, HomogeneousPoly>;

class HarmonicSpec {
 public:
  const Family& family() const noexcept { return family_; }
  Dimension dimension() const noexcept { return dimension_; }
  int degree() const noexcept { return degree_; }
  double eigenvalue() const noexcept { return eigenvalue_; }
  /// ||P||_{L2(S^{N-1})}, including the scale factor.
  double norm() const noexcept { return norm_; }
  /// Multiplier applied to the family's raw function.
  double scale() const noexcept { return scale_; }
  std::string label() const;

 private:
  friend HarmonicSpec make_harmonic(const Family& family, Dimension N);
  friend HarmonicSpec scaled(const HarmonicSpec& spec, double factor);

  HarmonicSpec(Family family, Dimension N, int degree, double eigenvalue)
      : family_(std::move(family)), dimension_(N), degree_(degree), eigenvalue_(eigenvalue) {}

  Family family_;
  Dimension dimension_;
  int degree_;
  double eigenvalue_;
  double scale_ = 1.0;
  double norm_ = 0.0;
};

/// l(N-2+l). Throws DomainError for N < 2 or l < 0.
double eigenvalue_of_degree(int N, int degree);

/// Builds a spec and fills in its eigenvalue and norm. Throws DomainError for
/// Planar with N != 2, negative degrees, and polynomials that are not
/// homogeneous, not harmonic, or identically zero.
HarmonicSpec make_harmonic(const Family& family, Dimension N);

HarmonicSpec make_zonal(Dimension N, int degree);
HarmonicSpec make_planar(int degree, Parity parity);
HarmonicSpec make_product(Dimension N);
HarmonicSpec make_polynomial(Dimension N, std::vector<Monomial> terms);

/// Same eigenfunction multiplied by factor != 0.
HarmonicSpec scaled(const HarmonicSpec& spec, double factor);
/// Same eigenfunction rescaled to unit L2(S^{N-1}) norm.
HarmonicSpec normalized(const HarmonicSpec& spec);

/// P(w). Throws DomainError on a dimension mismatch.
double evaluate(const HarmonicSpec& spec, const SpherePoint& omega);

/// P(x/|x|) for a nonzero x without the unit-norm check; the hot path used by
/// the weight and stencil routines.
double evaluate_direction(const HarmonicSpec& spec, std::span<const double> x);

/// |x|^l P(x/|x|), the harmonic homogeneous extension to R^N.
double extension(const HarmonicSpec& spec, std::span<const double> x);

/// ||P||_{L2(S^{N-1})}. Zonal and Planar specs integrate against
/// |S^{N-2}| sin^{N-2}(theta) d theta with adaptive quadrature; Product and
/// HomogeneousPoly specs expand P^2 into monomials and sum their exact sphere
/// integrals.
double l2_norm(const HarmonicSpec& spec);

/// True iff |P(w)| <= tol (tol > 0).
///
/// For Product, with m = min_i |w_i| and s = product_nodal_scaling(N), the
/// band is sandwiched as m^N <= |P(w)| <= s m: so m <= tol / s implies
/// membership, and membership implies m <= tol^{1/N}. The exact nodal set
/// (some coordinate zero) is recovered as tol -> 0.
bool on_nodal_set(const HarmonicSpec& spec, const SpherePoint& omega, double tol);

/// (N-1)^{-(N-1)/2}: the largest value of prod_{j != i} |w_j| on S^{N-1}.
double product_nodal_scaling(int N);

/// |Delta_h E(x)| for the extension E(x) = |x|^l P(x/|x|), using the
/// (2N+1)-point central-difference Laplacian with step h. Throws DomainError
/// if x = 0, h <= 0, or the stencil reaches the origin (h >= |x|/2).
double harmonicity_residual(const HarmonicSpec& spec, std::span<const double> x, double h);

/// Exact surface integral of the monomial prod_i w_i^{a_i} over S^{N-1}:
/// 0 if any a_i is odd, else 2 prod_i Gamma((a_i+1)/2) / Gamma(sum_i (a_i+1)/2).
double sphere_monomial_integral(std::span<const int> exponents);

}  // namespace hardyspec::harmonics
