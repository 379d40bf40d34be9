#include <cmath>

#include "cst/kernels/distance.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define CST_HAVE_AVX2_KERNEL 1
#include <immintrin.h>
#else
#define CST_HAVE_AVX2_KERNEL 0
#endif

namespace cst::kernels {

#if CST_HAVE_AVX2_KERNEL

bool avx2_compiled() noexcept { return true; }

__attribute__((target("avx2"))) void distances_avx2(const DistanceBlock& block,
                                                     double* out) noexcept {
  const auto attrs = block.columns.size();
  const auto n = block.records;
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d count = _mm256_set1_pd(block.attribute_count);

  std::size_t r = 0;
  for (; r + 4 <= n; r += 4) {
    __m256d sum = _mm256_setzero_pd();
    for (std::size_t a = 0; a < attrs; ++a) {
      const __m256d x = _mm256_loadu_pd(block.columns[a] + r);
      const __m256d c = _mm256_set1_pd(block.center[a]);
      __m256d term;
      if (block.categorical[a]) {
        term = _mm256_and_pd(_mm256_cmp_pd(x, c, _CMP_NEQ_UQ), one);
      } else {
        const __m256d diff = _mm256_andnot_pd(sign_mask, _mm256_sub_pd(x, c));
        term = _mm256_div_pd(diff, _mm256_set1_pd(block.divisors[a]));
      }
      sum = _mm256_add_pd(sum, term);
    }
    _mm256_storeu_pd(out + r, _mm256_div_pd(sum, count));
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

bool avx2_compiled() noexcept { return false; }
void distances_avx2(const DistanceBlock& block, double* out) noexcept {
  distances_scalar(block, out);
}

#endif

}  // namespace cst::kernels
