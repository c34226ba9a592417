#include "hardyspec/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "hardyspec/error.hpp"
#include "hardyspec/quadrature.hpp"

namespace hardyspec::harmonics {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// C_l^alpha(t) by the three-term recurrence; alpha = 0 gives Chebyshev T_l,
// the normalized limit of C_l^alpha / alpha.
double gegenbauer(int degree, double alpha, double t) {
  if (degree == 0) return 1.0;
  if (alpha == 0.0) {
    double prev = 1.0;
    double cur = t;
    for (int n = 2; n <= degree; ++n) {
      const double next = 2.0 * t * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  double prev = 1.0;
  double cur = 2.0 * alpha * t;
  for (int n = 2; n <= degree; ++n) {
    const double next = (2.0 * t * (n + alpha - 1.0) * cur - (n + 2.0 * alpha - 2.0) * prev) / n;
    prev = cur;
    cur = next;
  }
  return cur;
}

double int_power(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

double evaluate_polynomial(const std::vector<Monomial>& terms, std::span<const double> x) {
  double sum = 0.0;
  for (const Monomial& m : terms) {
    double term = m.coefficient;
    for (std::size_t i = 0; i < x.size(); ++i) term *= int_power(x[i], m.exponents[i]);
    sum += term;
  }
  return sum;
}

// Raw family value at a unit vector, before the spec's scale factor.
double raw_value(const HarmonicSpec& spec, std::span<const double> w) {
  return std::visit(
      Overloaded{
          [&](const Zonal& z) {
            return gegenbauer(z.degree, 0.5 * (spec.dimension() - 2), w[0]);
          },
          [&](const Planar& p) {
            const double theta = std::atan2(w[1], w[0]);
            return p.parity == Parity::Cos ? std::cos(p.degree * theta)
                                           : std::sin(p.degree * theta);
          },
          [&](const Product&) {
            double prod = 1.0;
            for (const double wi : w) prod *= wi;
            return prod;
          },
          [&](const HomogeneousPoly& poly) { return evaluate_polynomial(poly.terms, w); },
      },
      spec.family());
}

std::vector<Monomial> merge_terms(const std::vector<Monomial>& terms) {
  std::map<std::vector<int>, double> merged;
  for (const Monomial& m : terms) merged[m.exponents] += m.coefficient;
  std::vector<Monomial> out;
  for (const auto& [exps, coef] : merged) {
    if (coef != 0.0) out.push_back({exps, coef});
  }
  return out;
}

void validate_polynomial(const HomogeneousPoly& poly, int N) {
  if (poly.terms.empty()) throw DomainError("homogeneous polynomial has no terms");
  const int degree = [&] {
    int d = 0;
    for (const int e : poly.terms.front().exponents) d += e;
    return d;
  }();
  double max_coef = 0.0;
  for (const Monomial& m : poly.terms) {
    if (static_cast<int>(m.exponents.size()) != N) {
      throw DomainError("monomial exponent vector length differs from N");
    }
    int d = 0;
    for (const int e : m.exponents) {
      if (e < 0) throw DomainError("monomial exponents must be nonnegative");
      d += e;
    }
    if (d != degree) throw DomainError("polynomial is not homogeneous");
    if (!std::isfinite(m.coefficient)) throw DomainError("polynomial coefficient is not finite");
    max_coef = std::max(max_coef, std::abs(m.coefficient));
  }
  if (merge_terms(poly.terms).empty()) throw DomainError("polynomial is identically zero");

  // Symbolic Laplacian: d^2/dx_i^2 x^a = a_i (a_i - 1) x^{a - 2 e_i}.
  std::map<std::vector<int>, double> laplacian;
  for (const Monomial& m : poly.terms) {
    for (int i = 0; i < N; ++i) {
      const int a = m.exponents[i];
      if (a < 2) continue;
      std::vector<int> exps = m.exponents;
      exps[i] -= 2;
      laplacian[exps] += m.coefficient * a * (a - 1);
    }
  }
  const double tol = 1e-12 * max_coef * std::max(1, degree * degree);
  for (const auto& [exps, coef] : laplacian) {
    if (std::abs(coef) > tol) throw DomainError("polynomial is not harmonic");
  }
}

int family_degree(const Family& family, int N) {
  return std::visit(Overloaded{
                        [](const Zonal& z) { return z.degree; },
                        [](const Planar& p) { return p.degree; },
                        [N](const Product&) { return N; },
                        [](const HomogeneousPoly& poly) {
                          int d = 0;
                          for (const int e : poly.terms.front().exponents) d += e;
                          return d;
                        },
                    },
                    family);
}

double squared_polynomial_integral(const std::vector<Monomial>& terms, int N) {
  double sum = 0.0;
  std::vector<int> exps(static_cast<std::size_t>(N));
  for (const Monomial& a : terms) {
    for (const Monomial& b : terms) {
      for (int i = 0; i < N; ++i) exps[i] = a.exponents[i] + b.exponents[i];
      sum += a.coefficient * b.coefficient * sphere_monomial_integral(exps);
    }
  }
  return sum;
}

}  // namespace

Dimension::Dimension(int n) : n_(n) {
  if (n < 2) throw DomainError("dimension N must be at least 2");
}

SpherePoint::SpherePoint(std::vector<double> coordinates) : coordinates_(std::move(coordinates)) {
  if (coordinates_.empty()) throw DomainError("sphere point has no coordinates");
  double norm_sq = 0.0;
  for (const double x : coordinates_) norm_sq += x * x;
  if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-12) {
    throw DomainError("sphere point is not on the unit sphere");
  }
}

SpherePoint SpherePoint::from_direction(std::span<const double> x) {
  double norm_sq = 0.0;
  for (const double xi : x) norm_sq += xi * xi;
  if (!(norm_sq > 0.0)) throw DomainError("cannot normalize the zero vector");
  const double inv = 1.0 / std::sqrt(norm_sq);
  std::vector<double> w(x.begin(), x.end());
  for (double& wi : w) wi *= inv;
  return SpherePoint(std::move(w));
}

std::string HarmonicSpec::label() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Zonal&) { os << "zonal"; },
                 [&](const Planar& p) { os << (p.parity == Parity::Cos ? "planar-cos" : "planar-sin"); },
                 [&](const Product&) { os << "product"; },
                 [&](const HomogeneousPoly&) { os << "poly"; },
             },
             family_);
  os << "(N=" << dimension_.value() << ",l=" << degree_ << ")";
  return os.str();
}

double eigenvalue_of_degree(int N, int degree) {
  if (N < 2) throw DomainError("eigenvalue_of_degree: requires N >= 2");
  if (degree < 0) throw DomainError("eigenvalue_of_degree: requires degree >= 0");
  const long long l = degree;
  return static_cast<double>(l * (static_cast<long long>(N) - 2 + l));
}

HarmonicSpec make_harmonic(const Family& family, Dimension N) {
  Family stored = family;
  if (const auto* planar = std::get_if<Planar>(&family)) {
    if (N.value() != 2) throw DomainError("planar harmonics exist only for N = 2");
    if (planar->degree < 0) throw DomainError("degree must be nonnegative");
  }
  if (const auto* zonal = std::get_if<Zonal>(&family); zonal && zonal->degree < 0) {
    throw DomainError("degree must be nonnegative");
  }
  if (const auto* poly = std::get_if<HomogeneousPoly>(&family)) {
    validate_polynomial(*poly, N.value());
    stored = HomogeneousPoly{merge_terms(poly->terms)};
  }
  const int degree = family_degree(stored, N.value());
  HarmonicSpec spec(std::move(stored), N, degree, eigenvalue_of_degree(N.value(), degree));
  spec.norm_ = l2_norm(spec);
  if (!(spec.norm_ > 0.0)) throw DomainError("harmonic has zero norm");
  return spec;
}

HarmonicSpec make_zonal(Dimension N, int degree) { return make_harmonic(Zonal{degree}, N); }
HarmonicSpec make_planar(int degree, Parity parity) {
  return make_harmonic(Planar{degree, parity}, Dimension(2));
}
HarmonicSpec make_product(Dimension N) { return make_harmonic(Product{}, N); }
HarmonicSpec make_polynomial(Dimension N, std::vector<Monomial> terms) {
  return make_harmonic(HomogeneousPoly{std::move(terms)}, N);
}

HarmonicSpec scaled(const HarmonicSpec& spec, double factor) {
  if (!(factor != 0.0) || !std::isfinite(factor)) {
    throw DomainError("scale factor must be finite and nonzero");
  }
  HarmonicSpec out = spec;
  out.scale_ *= factor;
  out.norm_ *= std::abs(factor);
  return out;
}

HarmonicSpec normalized(const HarmonicSpec& spec) { return scaled(spec, 1.0 / spec.norm()); }

double evaluate_direction(const HarmonicSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dimension()) {
    throw DomainError("point dimension does not match the harmonic");
  }
  double norm_sq = 0.0;
  for (const double xi : x) norm_sq += xi * xi;
  if (!(norm_sq > 0.0)) throw DomainError("direction of the zero vector is undefined");
  const double inv = 1.0 / std::sqrt(norm_sq);
  double w[16];
  std::vector<double> heap;
  double* buf = w;
  if (x.size() > 16) {
    heap.resize(x.size());
    buf = heap.data();
  }
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i] * inv;
  return spec.scale() * raw_value(spec, std::span<const double>(buf, x.size()));
}

double evaluate(const HarmonicSpec& spec, const SpherePoint& omega) {
  if (omega.dimension() != spec.dimension()) {
    throw DomainError("sphere point dimension does not match the harmonic");
  }
  return spec.scale() * raw_value(spec, omega.coordinates());
}

double extension(const HarmonicSpec& spec, std::span<const double> x) {
  double norm_sq = 0.0;
  for (const double xi : x) norm_sq += xi * xi;
  return std::pow(std::sqrt(norm_sq), spec.degree()) * evaluate_direction(spec, x);
}

double sphere_monomial_integral(std::span<const int> exponents) {
  double log_num = std::log(2.0);
  double half_sum = 0.0;
  for (const int a : exponents) {
    if (a < 0) throw DomainError("monomial exponents must be nonnegative");
    if (a % 2 != 0) return 0.0;
    const double h = 0.5 * (a + 1);
    log_num += quadrature::log_gamma(h);
    half_sum += h;
  }
  return std::exp(log_num - quadrature::log_gamma(half_sum));
}

double l2_norm(const HarmonicSpec& spec) {
  const int N = spec.dimension();
  const double raw_sq = std::visit(
      Overloaded{
          [&](const Zonal& z) {
            const double alpha = 0.5 * (N - 2);
            const double peak = gegenbauer(z.degree, alpha, 1.0);
            auto integrand = [&](double theta) {
              const double c = gegenbauer(z.degree, alpha, std::cos(theta));
              return c * c * std::pow(std::sin(theta), N - 2);
            };
            const double tol = 1e-14 * std::max(1.0, peak * peak);
            return quadrature::sphere_surface_area(N - 1) *
                   quadrature::integrate_line(integrand, 0.0, std::numbers::pi, tol).value;
          },
          [&](const Planar& p) {
            auto integrand = [&](double theta) {
              const double v = p.parity == Parity::Cos ? std::cos(p.degree * theta)
                                                       : std::sin(p.degree * theta);
              return v * v;
            };
            return quadrature::integrate_line(integrand, 0.0, 2.0 * std::numbers::pi, 1e-13).value;
          },
          [&](const Product&) {
            const std::vector<int> exps(static_cast<std::size_t>(N), 2);
            return sphere_monomial_integral(exps);
          },
          [&](const HomogeneousPoly& poly) { return squared_polynomial_integral(poly.terms, N); },
      },
      spec.family());
  return std::abs(spec.scale()) * std::sqrt(raw_sq);
}

double product_nodal_scaling(int N) {
  if (N < 2) throw DomainError("product_nodal_scaling: requires N >= 2");
  return std::pow(static_cast<double>(N - 1), -0.5 * (N - 1));
}

bool on_nodal_set(const HarmonicSpec& spec, const SpherePoint& omega, double tol) {
  if (!(tol > 0.0)) throw DomainError("on_nodal_set: requires tol > 0");
  return std::abs(evaluate(spec, omega)) <= tol;
}

double harmonicity_residual(const HarmonicSpec& spec, std::span<const double> x, double h) {
  if (static_cast<int>(x.size()) != spec.dimension()) {
    throw DomainError("point dimension does not match the harmonic");
  }
  if (!(h > 0.0)) throw DomainError("harmonicity_residual: requires h > 0");
  double norm_sq = 0.0;
  for (const double xi : x) norm_sq += xi * xi;
  const double r = std::sqrt(norm_sq);
  if (!(r > 0.0)) throw DomainError("harmonicity_residual: x must be nonzero");
  if (h >= 0.5 * r) throw DomainError("harmonicity_residual: stencil reaches the origin");

  std::vector<double> p(x.begin(), x.end());
  const double center = extension(spec, p);
  double laplacian = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = x[i] + h;
    const double plus = extension(spec, p);
    p[i] = x[i] - h;
    const double minus = extension(spec, p);
    p[i] = x[i];
    laplacian += (plus - 2.0 * center + minus) / (h * h);
  }
  return std::abs(laplacian);
}

}  // namespace hardyspec::harmonics
