#include <cstdlib>
#include <string_view>

#include "hardyspec/error.hpp"
#include "hardyspec/kernels.hpp"

namespace hardyspec::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(HARDYSPEC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa choose_isa() {
  Isa best = Isa::Scalar;
  if (isa_available(Isa::Avx2)) best = Isa::Avx2;
  if (isa_available(Isa::Neon)) best = Isa::Neon;
  if (const char* request = std::getenv("HARDYSPEC_SIMD")) {
    const std::string_view name(request);
    if (name == "scalar") return Isa::Scalar;
    if (name == "avx2") return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
    if (name == "neon") return isa_available(Isa::Neon) ? Isa::Neon : Isa::Scalar;
  }
  return best;
}

void check_shapes(std::span<const double> diag, std::span<const double> off) {
  if (diag.empty()) throw DomainError("tridiagonal kernel: empty matrix");
  if (off.size() + 1 != diag.size()) {
    throw DomainError("tridiagonal kernel: off-diagonal must have n-1 entries");
  }
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: {
      static const bool available = cpu_has_avx2();
      return available;
    }
    case Isa::Neon:
#if defined(HARDYSPEC_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = choose_isa();
  return isa;
}

CountBatch sturm_counts(Isa isa, std::span<const double> diag, std::span<const double> off_sq,
                        double pivmin, const ShiftBatch& shifts) {
  check_shapes(diag, off_sq);
  if (!isa_available(isa)) throw DomainError("sturm_counts: requested ISA is not available");
  switch (isa) {
#if defined(HARDYSPEC_HAVE_AVX2)
    case Isa::Avx2: return detail::sturm_counts_avx2(diag, off_sq, pivmin, shifts);
#endif
#if defined(HARDYSPEC_HAVE_NEON)
    case Isa::Neon: return detail::sturm_counts_neon(diag, off_sq, pivmin, shifts);
#endif
    default: return detail::sturm_counts_scalar(diag, off_sq, pivmin, shifts);
  }
}

CountBatch sturm_counts(std::span<const double> diag, std::span<const double> off_sq,
                        double pivmin, const ShiftBatch& shifts) {
  return sturm_counts(active_isa(), diag, off_sq, pivmin, shifts);
}

SpectrumBounds gershgorin(Isa isa, std::span<const double> diag, std::span<const double> off) {
  check_shapes(diag, off);
  if (!isa_available(isa)) throw DomainError("gershgorin: requested ISA is not available");
  switch (isa) {
#if defined(HARDYSPEC_HAVE_AVX2)
    case Isa::Avx2: return detail::gershgorin_avx2(diag, off);
#endif
#if defined(HARDYSPEC_HAVE_NEON)
    case Isa::Neon: return detail::gershgorin_neon(diag, off);
#endif
    default: return detail::gershgorin_scalar(diag, off);
  }
}

SpectrumBounds gershgorin(std::span<const double> diag, std::span<const double> off) {
  return gershgorin(active_isa(), diag, off);
}

}  // namespace hardyspec::kernels
