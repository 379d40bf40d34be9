#include <cmath>

#include "cst/kernels/distance.hpp"

namespace cst::kernels {

void distances_scalar(const DistanceBlock& block, double* out) noexcept {
  const auto attrs = block.columns.size();
  for (std::size_t r = 0; r < block.records; ++r) {
    double sum = 0.0;
    for (std::size_t a = 0; a < attrs; ++a) {
      const double x = block.columns[a][r];
      const double c = block.center[a];
      sum += block.categorical[a] ? (x != c ? 1.0 : 0.0) : std::fabs(x - c) / block.divisors[a];
    }
    out[r] = sum / block.attribute_count;
  }
}

}  // namespace cst::kernels
