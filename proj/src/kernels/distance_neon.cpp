#include <cmath>

#include "cst/kernels/distance.hpp"

#if defined(__aarch64__)
#define CST_HAVE_NEON_KERNEL 1
#include <arm_neon.h>
#else
#define CST_HAVE_NEON_KERNEL 0
#endif

namespace cst::kernels {

#if CST_HAVE_NEON_KERNEL

bool neon_compiled() noexcept { return true; }

void distances_neon(const DistanceBlock& block, double* out) noexcept {
  const auto attrs = block.columns.size();
  const auto n = block.records;
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t count = vdupq_n_f64(block.attribute_count);

  std::size_t r = 0;
  for (; r + 2 <= n; r += 2) {
    float64x2_t sum = vdupq_n_f64(0.0);
    for (std::size_t a = 0; a < attrs; ++a) {
      const float64x2_t x = vld1q_f64(block.columns[a] + r);
      const float64x2_t c = vdupq_n_f64(block.center[a]);
      float64x2_t term;
      if (block.categorical[a]) {
        // vceqq is false for NaN, matching the scalar `!=`.
        const uint32x4_t ne = vmvnq_u32(vreinterpretq_u32_u64(vceqq_f64(x, c)));
        term = vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_u32(ne), vreinterpretq_u64_f64(one)));
      } else {
        term = vdivq_f64(vabsq_f64(vsubq_f64(x, c)), vdupq_n_f64(block.divisors[a]));
      }
      sum = vaddq_f64(sum, term);
    }
    vst1q_f64(out + r, vdivq_f64(sum, count));
  }
  for (; r < n; ++r) {
    double sum = 0.0;
    for (std::size_t a = 0; a < attrs; ++a) {
      const double x = block.columns[a][r];
      const double c = block.center[a];
      sum += block.categorical[a] ? (x != c ? 1.0 : 0.0) : std::fabs(x - c) / block.divisors[a];
    }
    out[r] = sum / block.attribute_count;
  }
}

#else

bool neon_compiled() noexcept { return false; }
void distances_neon(const DistanceBlock& block, double* out) noexcept {
  distances_scalar(block, out);
}

#endif

}  // namespace cst::kernels
