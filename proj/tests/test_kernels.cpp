#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hardyspec/error.hpp"
#include "hardyspec/kernels.hpp"
#include "hardyspec/quadrature.hpp"

using namespace hardyspec;
using namespace hardyspec::kernels;

namespace {

struct Matrix {
  std::vector<double> diag;
  std::vector<double> off;
  std::vector<double> off_sq;
};

Matrix random_matrix(std::size_t n, std::uint64_t seed, bool graded) {
  quadrature::Rng rng(seed);
  Matrix m;
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = graded ? std::pow(10.0, 12.0 * i / std::max<std::size_t>(n, 2)) : 1.0;
    m.diag.push_back(scale * rng.uniform(-3.0, 3.0));
    if (i + 1 < n) {
      // Occasional exact zero off-diagonal splits the matrix.
      const double e = rng.uniform() < 0.05 ? 0.0 : scale * rng.uniform(-2.0, 2.0);
      m.off.push_back(e);
      m.off_sq.push_back(e * e);
    }
  }
  return m;
}

std::vector<Isa> vector_isas() {
  std::vector<Isa> isas;
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (isa_available(isa)) isas.push_back(isa);
  }
  return isas;
}

}  // namespace

TEST_CASE("ISA reporting") {
  CHECK(isa_available(Isa::Scalar));
  CHECK(std::string(isa_name(Isa::Scalar)) == "scalar");
  CHECK(std::string(isa_name(Isa::Avx2)) == "avx2");
  CHECK(isa_available(active_isa()));
  MESSAGE("active kernel ISA: " << isa_name(active_isa()));
}

TEST_CASE("scalar Sturm counts match the exact second-difference spectrum") {
  // tridiag(-1, 2, -1) has eigenvalues 2 - 2 cos(j pi / (n + 1)).
  const std::size_t n = 50;
  const std::vector<double> diag(n, 2.0);
  const std::vector<double> off_sq(n - 1, 1.0);
  for (std::size_t j = 1; j <= n; ++j) {
    const double lambda = 2.0 - 2.0 * std::cos(j * std::numbers::pi / (n + 1));
    const ShiftBatch shifts{lambda - 1e-9, lambda + 1e-9, -1.0, 5.0};
    const CountBatch c = sturm_counts(Isa::Scalar, diag, off_sq, 1e-300, shifts);
    CHECK(c[0] == static_cast<long>(j - 1));
    CHECK(c[1] == static_cast<long>(j));
    CHECK(c[2] == 0);
    CHECK(c[3] == static_cast<long>(n));
  }
}

TEST_CASE("vector Sturm counts are identical to the scalar reference") {
  const auto isas = vector_isas();
  if (isas.empty()) {
    MESSAGE("no vector ISA available on this machine; equivalence test skipped");
    return;
  }
  quadrature::Rng rng(17);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 33u, 200u, 1001u}) {
    for (bool graded : {false, true}) {
      const Matrix m = random_matrix(n, 1000 + n + (graded ? 1 : 0), graded);
      const SpectrumBounds b = gershgorin(Isa::Scalar, m.diag, m.off);
      for (int trial = 0; trial < 50; ++trial) {
        ShiftBatch shifts{};
        for (double& s : shifts) s = rng.uniform(b.lower, b.upper);
        // Shifts equal to diagonal entries exercise the pivot floor.
        if (trial % 5 == 0) shifts[trial % 4] = m.diag[static_cast<std::size_t>(trial) % n];
        if (trial % 7 == 0) shifts[(trial + 1) % 4] = 0.0;
        const CountBatch ref = sturm_counts(Isa::Scalar, m.diag, m.off_sq, 1e-300, shifts);
        for (Isa isa : isas) {
          const CountBatch got = sturm_counts(isa, m.diag, m.off_sq, 1e-300, shifts);
          CHECK(got == ref);
        }
      }
    }
  }
}

TEST_CASE("vector Gershgorin bounds are identical to the scalar reference") {
  for (std::size_t n : {1u, 2u, 5u, 6u, 7u, 10u, 64u, 999u}) {
    const Matrix m = random_matrix(n, 77 + n, n % 2 == 0);
    const SpectrumBounds ref = gershgorin(Isa::Scalar, m.diag, m.off);
    CHECK(ref.lower <= ref.upper);
    for (Isa isa : vector_isas()) {
      const SpectrumBounds got = gershgorin(isa, m.diag, m.off);
      CHECK(got.lower == ref.lower);
      CHECK(got.upper == ref.upper);
    }
    // Every eigenvalue lies inside: count below lower is 0, below upper + pad is n.
    const ShiftBatch s{ref.lower - 1e-9 * std::abs(ref.lower) - 1e-12,
                       ref.upper + 1e-9 * std::abs(ref.upper) + 1e-12, 0.0, 0.0};
    const CountBatch c = sturm_counts(m.diag, m.off_sq, 1e-300, s);
    CHECK(c[0] == 0);
    CHECK(c[1] == static_cast<long>(n));
  }
}

TEST_CASE("kernel shape errors") {
  const std::vector<double> diag{1.0, 2.0};
  const std::vector<double> bad_off{1.0, 2.0};
  const ShiftBatch s{};
  CHECK_THROWS_AS(sturm_counts(diag, bad_off, 1e-300, s), DomainError);
  CHECK_THROWS_AS(gershgorin(std::vector<double>{}, std::vector<double>{}), DomainError);
}
