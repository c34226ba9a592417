#include "hardyspec/hardy.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <ostream>

#include "hardyspec/error.hpp"
#include "hardyspec/io.hpp"
#include "hardyspec/quadrature.hpp"

namespace hardyspec::hardy {

namespace {

using harmonics::HarmonicSpec;

double norm_of(std::span<const double> x) {
  double sq = 0.0;
  for (const double xi : x) sq += xi * xi;
  return std::sqrt(sq);
}

double mollifier_shape(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

double cosine_shape(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * t);
  return c * c;
}

// Integral over [a, b] to absolute tolerance tol; quadrature failures
// propagate as NumericalError.
double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  return quadrature::integrate_line(f, a, b, tol).value;
}

// Rough size of int |f| from 8 fixed Gauss-Legendre panels.
double magnitude(const std::function<double(double)>& f, double a, double b) {
  const auto nodes = quadrature::gauss_legendre_nodes();
  const auto weights = quadrature::gauss_legendre_weights();
  constexpr int kPanels = 8;
  const double half = 0.5 * (b - a) / kPanels;
  double sum = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = a + (2 * p + 1) * half;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * std::abs(f(mid + half * nodes[i]));
  }
  return sum * half;
}

// Radial integrals get an absolute budget of kIntegralTolerance, tightened
// for integrals much smaller than one and relaxed to 1e-13 relative for
// integrals so large that the absolute budget is below rounding.
double integrate_radial(const std::function<double(double)>& f, double a, double b) {
  const double size = magnitude(f, a, b);
  const double tol = std::max(kIntegralTolerance * std::clamp(size, 1e-6, 1.0), 1e-13 * size);
  return integrate(f, a, b, tol);
}

// Central-difference Laplacian of g at x.
template <class G>
double stencil_laplacian(const G& g, std::span<const double> x, double h) {
  std::vector<double> p(x.begin(), x.end());
  const double center = g(std::span<const double>(p));
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = x[i] + h;
    const double plus = g(std::span<const double>(p));
    p[i] = x[i] - h;
    const double minus = g(std::span<const double>(p));
    p[i] = x[i];
    sum += (plus - 2.0 * center + minus) / (h * h);
  }
  return sum;
}

}  // namespace

double BumpProfile::value(double t) const {
  return normalization_ *
         (kind_ == BumpKind::Mollifier ? mollifier_shape(t) : cosine_shape(t));
}

double BumpProfile::derivative(double t) const {
  if (std::abs(t) >= 1.0) return 0.0;
  if (kind_ == BumpKind::Mollifier) {
    const double q = 1.0 - t * t;
    return value(t) * (-2.0 * t / (q * q));
  }
  return -normalization_ * 0.5 * std::numbers::pi * std::sin(std::numbers::pi * t);
}

double BumpProfile::second_derivative(double t) const {
  if (std::abs(t) >= 1.0) return 0.0;
  if (kind_ == BumpKind::Mollifier) {
    const double q = 1.0 - t * t;
    const double slope = -2.0 * t / (q * q);
    const double slope_derivative = -2.0 / (q * q) - 8.0 * t * t / (q * q * q);
    return value(t) * (slope * slope + slope_derivative);
  }
  return -normalization_ * 0.5 * std::numbers::pi * std::numbers::pi *
         std::cos(std::numbers::pi * t);
}

BumpProfile make_bump(BumpKind kind) {
  BumpProfile phi;
  phi.kind_ = kind;
  const auto shape = kind == BumpKind::Mollifier ? mollifier_shape : cosine_shape;
  const double raw = integrate([&](double t) { return shape(t) * shape(t); }, -1.0, 1.0, 1e-15);
  phi.normalization_ = 1.0 / std::sqrt(raw);
  phi.l2_norm_ = std::sqrt(
      integrate([&](double t) { return phi.value(t) * phi.value(t); }, -1.0, 1.0, 1e-14));
  phi.derivative_energy_ = integrate(
      [&](double t) { return phi.derivative(t) * phi.derivative(t); }, -1.0, 1.0, 1e-13);
  return phi;
}

SeparableTestFunction::SeparableTestFunction(RadialProfile profile, HarmonicSpec angular,
                                             std::string label)
    : profile_(std::move(profile)), angular_(std::move(angular)), label_(std::move(label)) {
  const double a = profile_.inner;
  const double b = profile_.outer;
  if (!(a > 0.0 && a < b && std::isfinite(b))) {
    throw DomainError("radial support must satisfy 0 < inner < outer < infinity");
  }
  if (!profile_.value || !profile_.derivative) {
    throw DomainError("radial profile needs a value and a derivative");
  }
  // Sample in log(rho) to find the scale of f and reject f == 0.
  constexpr int kSamples = 257;
  double peak = 0.0;
  const double la = std::log(a);
  const double lb = std::log(b);
  for (int i = 0; i <= kSamples; ++i) {
    const double rho = std::exp(la + (lb - la) * i / kSamples);
    const double f = profile_.value(rho);
    const double df = profile_.derivative(rho);
    if (!std::isfinite(f) || !std::isfinite(df)) {
      throw DomainError("radial profile is not finite on its support");
    }
    if (i > 0 && i < kSamples) peak = std::max(peak, std::abs(f));
  }
  if (peak == 0.0) throw DomainError("radial profile is identically zero");
  if (std::abs(profile_.value(a)) > 1e-10 * peak || std::abs(profile_.value(b)) > 1e-10 * peak) {
    throw DomainError("radial profile must vanish at both ends of its support");
  }
}

double SeparableTestFunction::operator()(std::span<const double> x) const {
  const double r = norm_of(x);
  if (r <= profile_.inner || r >= profile_.outer) return 0.0;
  return profile_.value(r) * harmonics::evaluate_direction(angular_, x);
}

double weight_psi(const HarmonicSpec& spec, std::span<const double> x) {
  const double r = norm_of(x);
  if (!(r > 0.0)) throw DomainError("weight_psi: undefined at the origin");
  const int N = spec.dimension();
  return std::pow(r, 1.0 - 0.5 * N) * harmonics::evaluate_direction(spec, x);
}

double delta_psi_residual(const HarmonicSpec& spec, std::span<const double> x, double h) {
  if (static_cast<int>(x.size()) != spec.dimension()) {
    throw DomainError("delta_psi_residual: point dimension does not match the harmonic");
  }
  const double r = norm_of(x);
  if (!(r > 0.0)) throw DomainError("delta_psi_residual: undefined at the origin");
  if (!(h > 0.0)) throw DomainError("delta_psi_residual: requires h > 0");
  if (h >= 0.5 * r) throw DomainError("delta_psi_residual: stencil reaches the origin");
  const auto psi = [&spec](std::span<const double> p) { return weight_psi(spec, p); };
  const double laplacian = stencil_laplacian(psi, x, h);
  const double c = sharp_constant(spec.dimension(), spec.degree());
  return std::abs(laplacian + c * psi(x) / (r * r));
}

PsiConvergence psi_convergence(const HarmonicSpec& spec, std::span<const double> x, double h) {
  const int N = spec.dimension();
  const double r = norm_of(x);
  const double rms = spec.norm() / std::sqrt(quadrature::sphere_surface_area(N));
  PsiConvergence c{};
  c.residual_coarse = delta_psi_residual(spec, x, 2.0 * h);
  c.residual_fine = delta_psi_residual(spec, x, h);
  c.scale = (1.0 + sharp_constant(N, spec.degree())) * std::pow(r, -1.0 - 0.5 * N) * rms;
  c.ratio = c.residual_coarse / c.residual_fine;
  c.at_rounding_floor = c.residual_coarse <= 1e-9 * c.scale && c.residual_fine <= 1e-9 * c.scale;
  c.step = h;
  return c;
}

PsiConvergence psi_convergence(const HarmonicSpec& spec, std::span<const double> x) {
  const double r = norm_of(x);
  if (!(r > 0.0)) throw DomainError("psi_convergence: undefined at the origin");
  const int N = spec.dimension();
  // Cancellation error of the stencil: 2N+1 terms of size |psi| over h^2.
  const double size = std::abs(weight_psi(spec, x));
  const auto resolved = [&](double h) {
    return delta_psi_residual(spec, x, h) >= 100.0 * 4.0 * N * DBL_EPSILON * size / (h * h);
  };
  double h = std::min(2e-2, 0.2 * r);
  while (h > 1e-6 && resolved(0.5 * h)) h *= 0.5;
  PsiConvergence c = psi_convergence(spec, x, h);
  if (!resolved(h)) c.at_rounding_floor = true;
  return c;
}

std::vector<std::vector<double>> sample_off_nodal_points(const HarmonicSpec& spec, int count,
                                                         std::uint64_t seed) {
  if (count < 1) throw DomainError("sample_off_nodal_points: count must be positive");
  const int N = spec.dimension();
  const double rms = spec.norm() / std::sqrt(quadrature::sphere_surface_area(N));
  quadrature::Rng rng(seed);
  std::vector<std::vector<double>> points;
  points.reserve(static_cast<std::size_t>(count));
  std::vector<double> x(static_cast<std::size_t>(N));
  while (static_cast<int>(points.size()) < count) {
    double norm_sq = 0.0;
    for (double& xi : x) {
      xi = rng.normal();
      norm_sq += xi * xi;
    }
    const double radius = rng.uniform(0.5, 2.0);
    if (norm_sq == 0.0) continue;
    if (std::abs(harmonics::evaluate_direction(spec, x)) < 0.1 * rms) continue;
    const double factor = radius / std::sqrt(norm_sq);
    for (double& xi : x) xi *= factor;
    points.push_back(x);
  }
  return points;
}

double sharp_constant(int N, int degree) {
  const double half = 0.5 * (N - 2);
  return half * half + harmonics::eigenvalue_of_degree(N, degree);
}

SeparableTestFunction minimizer_element(const HarmonicSpec& spec, const BumpProfile& phi, int m) {
  if (m < 1) throw DomainError("minimizer_element: requires m >= 1");
  const double exponent = 1.0 - 0.5 * spec.dimension();
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(m));
  const double inv_m = 1.0 / m;
  RadialProfile profile{
      [phi, exponent, amplitude, inv_m](double rho) {
        const double t = std::log(rho) * inv_m;
        return amplitude * phi.value(t) * std::pow(rho, exponent);
      },
      [phi, exponent, amplitude, inv_m](double rho) {
        const double t = std::log(rho) * inv_m;
        return amplitude * std::pow(rho, exponent - 1.0) *
               (phi.derivative(t) * inv_m + exponent * phi.value(t));
      },
      std::exp(-static_cast<double>(m)), std::exp(static_cast<double>(m))};
  return SeparableTestFunction(std::move(profile), harmonics::normalized(spec),
                               "u_" + std::to_string(m));
}

double minimizer_laplacian(const HarmonicSpec& spec, const BumpProfile& phi, int m,
                           std::span<const double> x) {
  if (m < 1) throw DomainError("minimizer_laplacian: requires m >= 1");
  const HarmonicSpec unit = harmonics::normalized(spec);
  const double r = norm_of(x);
  if (!(r > 0.0)) throw DomainError("minimizer_laplacian: undefined at the origin");
  const double t = std::log(r) / m;
  const double psi = weight_psi(unit, x);
  const double u = phi.value(t) * psi / std::sqrt(static_cast<double>(m));
  const double c = sharp_constant(spec.dimension(), spec.degree());
  return std::pow(static_cast<double>(m), -2.5) * phi.second_derivative(t) * psi / (r * r) -
         c * u / (r * r);
}

double weighted_l2_norm_sq(const SeparableTestFunction& u) {
  const RadialProfile& f = u.radial();
  const double norm_sq = u.angular().norm() * u.angular().norm();
  const int N = u.angular().dimension();
  auto integrand = [&](double s) {
    const double rho = std::exp(s);
    const double v = f.value(rho);
    return v * v * std::exp((N - 2) * s);
  };
  return norm_sq * integrate_radial(integrand, std::log(f.inner), std::log(f.outer));
}

double dirichlet_energy(const SeparableTestFunction& u) {
  const RadialProfile& f = u.radial();
  const double norm_sq = u.angular().norm() * u.angular().norm();
  const int N = u.angular().dimension();
  const double lambda = u.angular().eigenvalue();
  auto integrand = [&](double s) {
    const double rho = std::exp(s);
    const double v = f.value(rho);
    const double dv = f.derivative(rho);
    return (dv * dv * rho * rho + lambda * v * v) * std::exp((N - 2) * s);
  };
  return norm_sq * integrate_radial(integrand, std::log(f.inner), std::log(f.outer));
}

double rayleigh_quotient(const SeparableTestFunction& u) {
  const double denominator = weighted_l2_norm_sq(u);
  if (!(denominator > 0.0)) throw DomainError("rayleigh_quotient: zero weighted norm");
  return dirichlet_energy(u) / denominator;
}

double form_value(const SeparableTestFunction& u, double k) {
  return dirichlet_energy(u) + k * weighted_l2_norm_sq(u);
}

SeparableTestFunction rescaled(const SeparableTestFunction& u, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("rescaled: requires sigma > 0");
  const RadialProfile& f = u.radial();
  RadialProfile g{[value = f.value, sigma](double rho) { return value(sigma * rho); },
                  [derivative = f.derivative, sigma](double rho) {
                    return sigma * derivative(sigma * rho);
                  },
                  f.inner / sigma, f.outer / sigma};
  return SeparableTestFunction(std::move(g), u.angular(), u.label() + "(sigma x)");
}

SeparableTestFunction random_test_function(const HarmonicSpec& spec, std::uint64_t seed) {
  quadrature::Rng rng(seed);
  const double start = rng.uniform(-3.0, 2.0);
  const double width = rng.uniform(0.5, 4.0);
  const double power = rng.uniform(-2.0, 2.0);
  constexpr int kTerms = 5;
  std::vector<double> coefficients(kTerms);
  for (double& c : coefficients) c = rng.normal();
  coefficients[0] += coefficients[0] >= 0.0 ? 0.5 : -0.5;

  // g(s) = cos^2(pi tau / 2) sum_j c_j T_j(tau), tau = 2 (s - start) / width - 1.
  struct Series {
    double value;
    double slope;  // d/d tau
  };
  auto series = [coefficients](double tau) {
    double t_prev = 1.0;
    double t_cur = tau;
    double u_prev = 0.0;  // U_{-1}
    double u_cur = 1.0;   // U_0
    Series s{coefficients[0], 0.0};
    for (int j = 1; j < kTerms; ++j) {
      // T_j' = j U_{j-1}
      s.value += coefficients[j] * t_cur;
      s.slope += coefficients[j] * j * u_cur;
      const double t_next = 2.0 * tau * t_cur - t_prev;
      const double u_next = 2.0 * tau * u_cur - u_prev;
      t_prev = t_cur;
      t_cur = t_next;
      u_prev = u_cur;
      u_cur = u_next;
    }
    return s;
  };
  auto log_profile = [=](double s, bool want_slope) {
    const double tau = 2.0 * (s - start) / width - 1.0;
    if (tau <= -1.0 || tau >= 1.0) return 0.0;
    const double half_angle = 0.5 * std::numbers::pi * tau;
    const double window = std::cos(half_angle) * std::cos(half_angle);
    const double window_slope = -0.5 * std::numbers::pi * std::sin(2.0 * half_angle);
    const Series p = series(tau);
    if (!want_slope) return window * p.value;
    return (window_slope * p.value + window * p.slope) * 2.0 / width;
  };
  // Amplitude chosen so that the weighted norm is one.
  const int N = spec.dimension();
  const double raw_weighted = integrate_radial(
      [&](double s) {
        const double v = log_profile(s, false) * std::exp(power * s);
        return v * v * std::exp((N - 2) * s);
      },
      start, start + width);
  const double amplitude = 1.0 / (spec.norm() * std::sqrt(raw_weighted));
  RadialProfile profile{
      [=](double rho) {
        return amplitude * log_profile(std::log(rho), false) * std::pow(rho, power);
      },
      [=](double rho) {
        const double s = std::log(rho);
        return amplitude * (log_profile(s, true) + power * log_profile(s, false)) *
               std::pow(rho, power - 1.0);
      },
      std::exp(start), std::exp(start + width)};
  return SeparableTestFunction(std::move(profile), spec, "random#" + std::to_string(seed));
}

std::vector<OptimalitySweepRow> optimality_sweep(const HarmonicSpec& spec, const BumpProfile& phi,
                                                 std::span<const int> m_list) {
  if (m_list.empty()) throw DomainError("optimality_sweep: empty m list");
  const double constant = sharp_constant(spec.dimension(), spec.degree());
  std::vector<OptimalitySweepRow> rows;
  rows.reserve(m_list.size());
  for (const int m : m_list) {
    if (m < 1) throw DomainError("optimality_sweep: every m must be >= 1");
    const double rayleigh = rayleigh_quotient(minimizer_element(spec, phi, m));
    const double predicted =
        constant + phi.derivative_energy() / (static_cast<double>(m) * static_cast<double>(m));
    rows.push_back({m, rayleigh, predicted, rayleigh - predicted});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const OptimalitySweepRow> rows) {
  out << "m,rayleigh,predicted,gap\n";
  for (const OptimalitySweepRow& row : rows) {
    out << row.m << ',' << io::format_double(row.rayleigh) << ','
        << io::format_double(row.predicted) << ',' << io::format_double(row.gap) << '\n';
  }
}

}  // namespace hardyspec::hardy
