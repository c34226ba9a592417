#pragma once

// Data-parallel inner loops of the radial eigensolver.
//
// Every kernel has a scalar reference implementation and vector variants
// (AVX2 on x86-64, NEON on AArch64). The vector variants perform the same
// IEEE operations in the same order as the reference, so results are
// bit-identical; the project builds with -ffp-contract=off to keep it that way.

#include <array>
#include <cstddef>
#include <span>

namespace hardyspec::kernels {

/// Number of shifts handled per Sturm-count call (one AVX2 register of doubles).
inline constexpr std::size_t kShiftBatch = 4;

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

/// Variant used by the dispatching overloads. Chosen once, at first use: the
/// best available ISA, unless HARDYSPEC_SIMD=scalar|avx2|neon requests another
/// (an unavailable request falls back to Scalar).
Isa active_isa();

using ShiftBatch = std::array<double, kShiftBatch>;
using CountBatch = std::array<long, kShiftBatch>;

/// Sturm-sequence inertia of the symmetric tridiagonal matrix with diagonal
/// `diag` and squared off-diagonal `off_sq` (size n-1): for every shift x,
/// the number of eigenvalues strictly below x. Pivots smaller than `pivmin`
/// in magnitude are replaced by -pivmin.
CountBatch sturm_counts(Isa isa, std::span<const double> diag, std::span<const double> off_sq,
                        double pivmin, const ShiftBatch& shifts);
CountBatch sturm_counts(std::span<const double> diag, std::span<const double> off_sq,
                        double pivmin, const ShiftBatch& shifts);

struct SpectrumBounds {
  double lower;
  double upper;
};

/// Gershgorin enclosure of the spectrum of a symmetric tridiagonal matrix.
SpectrumBounds gershgorin(Isa isa, std::span<const double> diag, std::span<const double> off);
SpectrumBounds gershgorin(std::span<const double> diag, std::span<const double> off);

namespace detail {
CountBatch sturm_counts_scalar(std::span<const double> diag, std::span<const double> off_sq,
                               double pivmin, const ShiftBatch& shifts);
SpectrumBounds gershgorin_scalar(std::span<const double> diag, std::span<const double> off);
#if defined(HARDYSPEC_HAVE_AVX2)
CountBatch sturm_counts_avx2(std::span<const double> diag, std::span<const double> off_sq,
                             double pivmin, const ShiftBatch& shifts);
SpectrumBounds gershgorin_avx2(std::span<const double> diag, std::span<const double> off);
#endif
#if defined(HARDYSPEC_HAVE_NEON)
CountBatch sturm_counts_neon(std::span<const double> diag, std::span<const double> off_sq,
                             double pivmin, const ShiftBatch& shifts);
SpectrumBounds gershgorin_neon(std::span<const double> diag, std::span<const double> off);
#endif
}  // namespace detail

}  // namespace hardyspec::kernels
