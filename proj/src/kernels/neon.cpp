// NEON variants for AArch64: two float64x2 registers cover one shift batch.

#include <algorithm>
#include <cmath>

#include <arm_neon.h>

#include "hardyspec/kernels.hpp"

namespace hardyspec::kernels::detail {

namespace {

struct Pivots {
  float64x2_t d;
  int64x2_t count;
};

inline void pivot_step(Pivots& p, float64x2_t piv, float64x2_t neg_piv) {
  const uint64x2_t tiny = vcltq_f64(vabsq_f64(p.d), piv);
  p.d = vbslq_f64(tiny, neg_piv, p.d);
  // All-ones mask reinterpreted as -1.
  p.count = vsubq_s64(p.count, vreinterpretq_s64_u64(vcltzq_f64(p.d)));
}

}  // namespace

CountBatch sturm_counts_neon(std::span<const double> diag, std::span<const double> off_sq,
                             double pivmin, const ShiftBatch& shifts) {
  const std::size_t n = diag.size();
  const float64x2_t x_lo = vld1q_f64(shifts.data());
  const float64x2_t x_hi = vld1q_f64(shifts.data() + 2);
  const float64x2_t piv = vdupq_n_f64(pivmin);
  const float64x2_t neg_piv = vdupq_n_f64(-pivmin);

  Pivots lo{vsubq_f64(vdupq_n_f64(diag[0]), x_lo), vdupq_n_s64(0)};
  Pivots hi{vsubq_f64(vdupq_n_f64(diag[0]), x_hi), vdupq_n_s64(0)};
  pivot_step(lo, piv, neg_piv);
  pivot_step(hi, piv, neg_piv);
  for (std::size_t i = 1; i < n; ++i) {
    const float64x2_t a = vdupq_n_f64(diag[i]);
    const float64x2_t e = vdupq_n_f64(off_sq[i - 1]);
    lo.d = vsubq_f64(vsubq_f64(a, x_lo), vdivq_f64(e, lo.d));
    hi.d = vsubq_f64(vsubq_f64(a, x_hi), vdivq_f64(e, hi.d));
    pivot_step(lo, piv, neg_piv);
    pivot_step(hi, piv, neg_piv);
  }
  return {static_cast<long>(vgetq_lane_s64(lo.count, 0)),
          static_cast<long>(vgetq_lane_s64(lo.count, 1)),
          static_cast<long>(vgetq_lane_s64(hi.count, 0)),
          static_cast<long>(vgetq_lane_s64(hi.count, 1))};
}

SpectrumBounds gershgorin_neon(std::span<const double> diag, std::span<const double> off) {
  const std::size_t n = diag.size();
  double lower = diag[0];
  double upper = diag[0];
  auto scalar_row = [&](std::size_t i) {
    const double left = i > 0 ? std::abs(off[i - 1]) : 0.0;
    const double right = i + 1 < n ? std::abs(off[i]) : 0.0;
    const double radius = left + right;
    lower = std::min(lower, diag[i] - radius);
    upper = std::max(upper, diag[i] + radius);
  };
  scalar_row(0);
  std::size_t i = 1;
  if (n > 3) {
    float64x2_t lo = vdupq_n_f64(lower);
    float64x2_t hi = vdupq_n_f64(upper);
    for (; i + 2 <= n - 1; i += 2) {
      const float64x2_t radius =
          vaddq_f64(vabsq_f64(vld1q_f64(off.data() + i - 1)), vabsq_f64(vld1q_f64(off.data() + i)));
      const float64x2_t a = vld1q_f64(diag.data() + i);
      lo = vminq_f64(lo, vsubq_f64(a, radius));
      hi = vmaxq_f64(hi, vaddq_f64(a, radius));
    }
    lower = std::min({lower, vgetq_lane_f64(lo, 0), vgetq_lane_f64(lo, 1)});
    upper = std::max({upper, vgetq_lane_f64(hi, 0), vgetq_lane_f64(hi, 1)});
  }
  for (; i < n; ++i) scalar_row(i);
  return {lower, upper};
}

}  // namespace hardyspec::kernels::detail
