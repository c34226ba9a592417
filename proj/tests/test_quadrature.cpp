#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hardyspec/error.hpp"
#include "hardyspec/quadrature.hpp"

using namespace hardyspec;
using namespace hardyspec::quadrature;

TEST_CASE("integrate_line reproduces simple integrals") {
  const auto square = integrate_line([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
  CHECK(square.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(square.error_estimate <= 1e-12);
  CHECK(square.evaluations > 0);

  const auto gauss = integrate_line([](double t) { return std::exp(-t * t); }, -8.0, 8.0, 1e-10);
  CHECK(std::abs(gauss.value - std::sqrt(std::numbers::pi)) <= 1e-10);
}

TEST_CASE("15-point panels are exact on degree 29") {
  // Monomials x^d on [-0.3, 1.7]; the exact value is a closed form.
  for (int d = 0; d <= 29; ++d) {
    const double a = -0.3;
    const double b = 1.7;
    const double exact = (std::pow(b, d + 1) - std::pow(a, d + 1)) / (d + 1);
    const auto r = integrate_line([d](double x) { return std::pow(x, d); }, a, b, 1e-6);
    CHECK(std::abs(r.value - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
  }
  const auto nodes = gauss_legendre_nodes();
  const auto weights = gauss_legendre_weights();
  REQUIRE(nodes.size() == 15);
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    total += weights[i];
    CHECK(nodes[i] == doctest::Approx(-nodes[14 - i]).epsilon(1e-15));
  }
  CHECK(total == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("mollifier normalization is self-consistent") {
  auto shape = [](double t) { return std::abs(t) < 1.0 ? std::exp(-2.0 / (1.0 - t * t)) : 0.0; };
  const double raw = integrate_line(shape, -1.0, 1.0, 1e-15).value;
  const double c2 = 1.0 / raw;
  const double normalized = integrate_line([&](double t) { return c2 * shape(t); }, -1.0, 1.0, 1e-13).value;
  CHECK(normalized == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("integrate_line error paths") {
  CHECK_THROWS_AS(integrate_line([](double) { return 1.0; }, 1.0, 1.0, 1e-6), DomainError);
  CHECK_THROWS_AS(integrate_line([](double) { return 1.0; }, 0.0, 1.0, 0.0), DomainError);
  // Resolving 1e6 oscillations needs more panels than the budget allows.
  try {
    integrate_line([](double x) { return 1.0 + std::sin(2e7 * x); }, 0.0, 1.0, 1e-10);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.best_estimate() == doctest::Approx(1.0).epsilon(0.5));
    CHECK(e.error_estimate() > 1e-10);
  }
  // A divergent integrand eventually produces a non-finite sample.
  CHECK_THROWS_AS(integrate_line([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-8), NumericalError);
  CHECK_THROWS_AS(integrate_line([](double x) { return 1.0 / x; }, -1.0, 1.0, 1e-8), NumericalError);
}

TEST_CASE("results are deterministic") {
  auto f = [](double x) { return std::sin(30.0 * x) * std::exp(-x); };
  const auto a = integrate_line(f, 0.0, 5.0, 1e-11);
  const auto b = integrate_line(f, 0.0, 5.0, 1e-11);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  // Closed form: Im int e^{(-1 + 30i)x} dx.
  const double exact = (30.0 - std::exp(-5.0) * (std::sin(150.0) + 30.0 * std::cos(150.0))) / 901.0;
  CHECK(std::abs(a.value - exact) <= 1e-11);
}

TEST_CASE("log_gamma matches the standard library to 12 digits") {
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 25.5, 100.0, 171.3}) {
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
}

TEST_CASE("sphere_surface_area") {
  CHECK(sphere_surface_area(1) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(sphere_surface_area(2) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-13));
  CHECK(sphere_surface_area(3) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-13));
  CHECK(std::abs(sphere_surface_area(4) - 2.0 * std::numbers::pi * std::numbers::pi) <= 1e-10);
  CHECK_THROWS_AS(sphere_surface_area(0), DomainError);
}

TEST_CASE("Monte Carlo sphere integrals") {
  SUBCASE("constant on S^2") {
    const auto est = integrate_sphere_mc([](std::span<const double>) { return 1.0; }, 3, 1000, 7);
    CHECK(est.mean == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
    CHECK(est.standard_error <= 1e-12);
  }
  SUBCASE("(x1 x2)^2 on the circle against a direct quadrature") {
    const double oracle = integrate_line(
        [](double t) {
          const double v = std::cos(t) * std::sin(t);
          return v * v;
        },
        0.0, 2.0 * std::numbers::pi, 1e-13).value;
    CHECK(oracle == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
    const auto est = integrate_sphere_mc(
        [](std::span<const double> w) { return w[0] * w[0] * w[1] * w[1]; }, 2, 1000000, 42);
    CHECK(std::abs(est.mean - oracle) <= 3.0 * est.standard_error);
  }
  SUBCASE("x1^2 ... xN^2 against the Gamma closed form") {
    for (int N = 2; N <= 6; ++N) {
      const double closed = 2.0 * std::pow(std::tgamma(1.5), N) / std::tgamma(1.5 * N);
      const auto est = integrate_sphere_mc(
          [](std::span<const double> w) {
            double p = 1.0;
            for (double x : w) p *= x * x;
            return p;
          },
          N, 200000, 1000 + N);
      CHECK(std::abs(est.mean - closed) <= 4.0 * est.standard_error);
    }
  }
  SUBCASE("same seed gives bit-identical output") {
    auto f = [](std::span<const double> w) { return w[0] + w[1] * w[2]; };
    const auto a = integrate_sphere_mc(f, 3, 5000, 99);
    const auto b = integrate_sphere_mc(f, 3, 5000, 99);
    const auto c = integrate_sphere_mc(f, 3, 5000, 100);
    CHECK(a.mean == b.mean);
    CHECK(a.standard_error == b.standard_error);
    CHECK(a.mean != c.mean);
  }
  CHECK_THROWS_AS(integrate_sphere_mc([](std::span<const double>) { return 1.0; }, 3, 99, 1),
                  DomainError);
}

TEST_CASE("Rng streams are pinned") {
  Rng a(2024);
  Rng b(2024);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  // Sample moments of the normal stream.
  Rng g(5);
  double sum = 0.0;
  double sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = g.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}
