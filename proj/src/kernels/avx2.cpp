// AVX2 variants. This translation unit is compiled with -mavx2 and without
// -mfma: the Sturm recurrence must round exactly like the scalar reference.

#include <algorithm>
#include <cmath>

#include <immintrin.h>

#include "hardyspec/kernels.hpp"

namespace hardyspec::kernels::detail {

CountBatch sturm_counts_avx2(std::span<const double> diag, std::span<const double> off_sq,
                             double pivmin, const ShiftBatch& shifts) {
  const std::size_t n = diag.size();
  const __m256d x = _mm256_loadu_pd(shifts.data());
  const __m256d piv = _mm256_set1_pd(pivmin);
  const __m256d neg_piv = _mm256_set1_pd(-pivmin);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  __m256i count = _mm256_setzero_si256();

  __m256d d = _mm256_sub_pd(_mm256_set1_pd(diag[0]), x);
  __m256d tiny = _mm256_cmp_pd(_mm256_andnot_pd(sign_bit, d), piv, _CMP_LT_OQ);
  d = _mm256_blendv_pd(d, neg_piv, tiny);
  count = _mm256_sub_epi64(count, _mm256_castpd_si256(_mm256_cmp_pd(d, zero, _CMP_LT_OQ)));

  for (std::size_t i = 1; i < n; ++i) {
    const __m256d shifted = _mm256_sub_pd(_mm256_set1_pd(diag[i]), x);
    d = _mm256_sub_pd(shifted, _mm256_div_pd(_mm256_set1_pd(off_sq[i - 1]), d));
    tiny = _mm256_cmp_pd(_mm256_andnot_pd(sign_bit, d), piv, _CMP_LT_OQ);
    d = _mm256_blendv_pd(d, neg_piv, tiny);
    count = _mm256_sub_epi64(count, _mm256_castpd_si256(_mm256_cmp_pd(d, zero, _CMP_LT_OQ)));
  }

  alignas(32) long long lanes[kShiftBatch];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), count);
  CountBatch out{};
  for (std::size_t lane = 0; lane < kShiftBatch; ++lane) out[lane] = static_cast<long>(lanes[lane]);
  return out;
}

SpectrumBounds gershgorin_avx2(std::span<const double> diag, std::span<const double> off) {
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
  if (n > 5) {
    const __m256d sign_bit = _mm256_set1_pd(-0.0);
    __m256d lo = _mm256_set1_pd(lower);
    __m256d hi = _mm256_set1_pd(upper);
    // Rows 1..n-2 have both neighbours.
    for (; i + 4 <= n - 1; i += 4) {
      const __m256d left = _mm256_andnot_pd(sign_bit, _mm256_loadu_pd(off.data() + i - 1));
      const __m256d right = _mm256_andnot_pd(sign_bit, _mm256_loadu_pd(off.data() + i));
      const __m256d radius = _mm256_add_pd(left, right);
      const __m256d a = _mm256_loadu_pd(diag.data() + i);
      lo = _mm256_min_pd(lo, _mm256_sub_pd(a, radius));
      hi = _mm256_max_pd(hi, _mm256_add_pd(a, radius));
    }
    alignas(32) double lo_lanes[4];
    alignas(32) double hi_lanes[4];
    _mm256_store_pd(lo_lanes, lo);
    _mm256_store_pd(hi_lanes, hi);
    for (int lane = 0; lane < 4; ++lane) {
      lower = std::min(lower, lo_lanes[lane]);
      upper = std::max(upper, hi_lanes[lane]);
    }
  }
  for (; i < n; ++i) scalar_row(i);
  return {lower, upper};
}

}  // namespace hardyspec::kernels::detail
