#include "hardyspec/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <limits>
#include <queue>
#include <vector>

#include "hardyspec/error.hpp"

namespace hardyspec::quadrature {

namespace {

constexpr int kRuleOrder = 15;
constexpr std::size_t kMaxPanels = 20000;

struct Rule {
  std::array<double, kRuleOrder> nodes{};
  std::array<double, kRuleOrder> weights{};
};

// Newton iteration on P_n from the Chebyshev initial guesses.
Rule build_rule() {
  Rule rule;
  const int n = kRuleOrder;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-17) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // Ascending order, with the middle node exactly zero.
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  rule.nodes[n / 2] = 0.0;
  for (int i = 0; i < n / 2; ++i) {
    const double node = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    const double weight = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.nodes[i] = -node;
    rule.nodes[n - 1 - i] = node;
    rule.weights[i] = weight;
    rule.weights[n - 1 - i] = weight;
  }
  return rule;
}

const Rule& rule() {
  static const Rule r = build_rule();
  return r;
}

struct PanelSum {
  double value = 0.0;
  double abs_value = 0.0;
};

PanelSum apply_rule(const std::function<double(double)>& f, double a, double b) {
  const Rule& r = rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  PanelSum s;
  for (int i = 0; i < kRuleOrder; ++i) {
    const double fx = f(mid + half * r.nodes[i]);
    if (!std::isfinite(fx)) {
      throw NumericalError("integrand is not finite on the integration interval", 0.0,
                           std::numeric_limits<double>::infinity());
    }
    s.value += r.weights[i] * fx;
    s.abs_value += r.weights[i] * std::abs(fx);
  }
  s.value *= half;
  s.abs_value *= half;
  return s;
}

struct Panel {
  double a;
  double b;
  double coarse;  // one-panel value
  double value;   // sum over the two halves
  double left;
  double right;
  double error;
  bool at_rounding_floor;
};

Panel refine(const std::function<double(double)>& f, double a, double b, double coarse) {
  const double mid = 0.5 * (a + b);
  const PanelSum l = apply_rule(f, a, mid);
  const PanelSum r = apply_rule(f, mid, b);
  Panel p{a, b, coarse, l.value + r.value, l.value, r.value, 0.0, false};
  p.error = std::abs(p.value - coarse);
  p.at_rounding_floor = p.error <= 20.0 * DBL_EPSILON * (l.abs_value + r.abs_value) ||
                        (b - a) <= 64.0 * DBL_EPSILON * std::max(std::abs(a), std::abs(b));
  return p;
}

}  // namespace

std::span<const double> gauss_legendre_nodes() { return rule().nodes; }
std::span<const double> gauss_legendre_weights() { return rule().weights; }

IntegralResult integrate_line(const std::function<double(double)>& f, double a, double b,
                              double tol) {
  if (!(a < b)) throw DomainError("integrate_line: requires a < b");
  if (!(tol > 0.0)) throw DomainError("integrate_line: requires tol > 0");

  std::vector<Panel> panels;
  panels.reserve(64);
  const PanelSum whole = apply_rule(f, a, b);
  panels.push_back(refine(f, a, b, whole.value));
  long evaluations = 3L * kRuleOrder;

  auto by_error = [&panels](std::size_t i, std::size_t j) {
    return panels[i].error < panels[j].error;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)> queue(by_error);
  queue.push(0);
  double total_error = panels[0].error;

  auto finish = [&]() {
    std::vector<std::size_t> order(panels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&panels](std::size_t i, std::size_t j) { return panels[i].a < panels[j].a; });
    // Pairwise summation in positional order.
    std::vector<double> values;
    values.reserve(order.size());
    for (const std::size_t i : order) values.push_back(panels[i].value);
    while (values.size() > 1) {
      std::vector<double> next;
      next.reserve((values.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < values.size(); i += 2) next.push_back(values[i] + values[i + 1]);
      if (values.size() % 2 == 1) next.push_back(values.back());
      values.swap(next);
    }
    double error = 0.0;
    for (const Panel& p : panels) error += p.error;
    return IntegralResult{values.front(), error, evaluations};
  };

  while (total_error > tol) {
    // Skip panels that cannot be improved any further.
    while (!queue.empty() && panels[queue.top()].at_rounding_floor) queue.pop();
    if (queue.empty()) {
      const IntegralResult best = finish();
      throw NumericalError("integrate_line: tolerance is below the rounding floor", best.value,
                           best.error_estimate);
    }
    if (panels.size() + 1 > kMaxPanels) {
      const IntegralResult best = finish();
      throw NumericalError("integrate_line: panel budget exhausted", best.value,
                           best.error_estimate);
    }
    const std::size_t worst = queue.top();
    queue.pop();
    const Panel parent = panels[worst];
    const double mid = 0.5 * (parent.a + parent.b);
    panels[worst] = refine(f, parent.a, mid, parent.left);
    panels.push_back(refine(f, mid, parent.b, parent.right));
    evaluations += 4L * kRuleOrder;
    queue.push(worst);
    queue.push(panels.size() - 1);
    // Recompute rather than update incrementally so the sum does not drift.
    total_error = 0.0;
    for (const Panel& p : panels) total_error += p.error;
  }
  return finish();
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: requires x > 0");
  static constexpr std::array<double, 9> kCoefficients = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection keeps the series in its accurate range.
    return std::log(std::numbers::pi / std::abs(std::sin(std::numbers::pi * x))) -
           log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double sum = kCoefficients[0];
  for (int i = 1; i < 9; ++i) sum += kCoefficients[i] / (z + i);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double sphere_surface_area(int N) {
  if (N < 1) throw DomainError("sphere_surface_area: requires N >= 1");
  const double half = 0.5 * N;
  return std::exp(std::log(2.0) + half * std::log(std::numbers::pi) - log_gamma(half));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

MonteCarloEstimate integrate_sphere_mc(const std::function<double(std::span<const double>)>& f,
                                       int N, long samples, std::uint64_t seed) {
  if (N < 1) throw DomainError("integrate_sphere_mc: requires N >= 1");
  if (samples < 100) throw DomainError("integrate_sphere_mc: requires at least 100 samples");
  Rng rng(seed);
  std::vector<double> point(static_cast<std::size_t>(N));
  // Welford accumulation.
  double mean = 0.0;
  double m2 = 0.0;
  for (long s = 0; s < samples; ++s) {
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (double& x : point) {
        x = rng.normal();
        norm_sq += x * x;
      }
    } while (norm_sq == 0.0);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : point) x *= inv;
    const double value = f(point);
    const double delta = value - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (value - mean);
  }
  const double area = sphere_surface_area(N);
  const double variance = m2 / static_cast<double>(samples - 1);
  return {area * mean, area * std::sqrt(variance / static_cast<double>(samples))};
}

}  // namespace hardyspec::quadrature
