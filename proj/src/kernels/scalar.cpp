#include <algorithm>
#include <cmath>

#include "hardyspec/kernels.hpp"

namespace hardyspec::kernels::detail {

CountBatch sturm_counts_scalar(std::span<const double> diag, std::span<const double> off_sq,
                               double pivmin, const ShiftBatch& shifts) {
  CountBatch counts{};
  const std::size_t n = diag.size();
  for (std::size_t lane = 0; lane < kShiftBatch; ++lane) {
    const double x = shifts[lane];
    long count = 0;
    double d = diag[0] - x;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
      d = (diag[i] - x) - off_sq[i - 1] / d;
      if (std::abs(d) < pivmin) d = -pivmin;
      if (d < 0.0) ++count;
    }
    counts[lane] = count;
  }
  return counts;
}

SpectrumBounds gershgorin_scalar(std::span<const double> diag, std::span<const double> off) {
  const std::size_t n = diag.size();
  double lower = diag[0];
  double upper = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? std::abs(off[i - 1]) : 0.0;
    const double right = i + 1 < n ? std::abs(off[i]) : 0.0;
    const double radius = left + right;
    lower = std::min(lower, diag[i] - radius);
    upper = std::max(upper, diag[i] + radius);
  }
  return {lower, upper};
}

}  // namespace hardyspec::kernels::detail
