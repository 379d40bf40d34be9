#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace cst::kernels {

/// Mixed-type tuple distances from one center to a block of records stored
/// column-major. For record r:
///
///   out[r] = (sum_a term_a(r)) / attribute_count
///   term_a = categorical[a] ? (col_a[r] != center[a]) : |col_a[r] - center[a]| / divisor[a]
///
/// Terms are accumulated left to right over attributes, one record per SIMD
/// lane, so every variant returns the scalar result bit-for-bit.
struct DistanceBlock {
  std::span<const double* const> columns;
  std::span<const double> center;
  std::span<const double> divisors;
  std::span<const std::uint8_t> categorical;
  double attribute_count = 1.0;
  std::size_t records = 0;
};

void distances_scalar(const DistanceBlock& block, double* out) noexcept;

// Present only when the compiler can target the ISA; callers go through
// dispatch unless they are testing a specific variant.
bool avx2_compiled() noexcept;
void distances_avx2(const DistanceBlock& block, double* out) noexcept;
bool neon_compiled() noexcept;
void distances_neon(const DistanceBlock& block, double* out) noexcept;

enum class Isa { scalar, avx2, neon };

/// Best variant the running CPU supports.
[[nodiscard]] Isa detect_isa() noexcept;
/// Variant used by distances(); defaults to detect_isa(). CST_FORCE_SCALAR=1
/// in the environment pins the scalar path.
[[nodiscard]] Isa active_isa() noexcept;
/// Pins a variant; an unsupported request falls back to scalar.
void set_active_isa(Isa isa) noexcept;
[[nodiscard]] std::string_view to_string(Isa isa) noexcept;

void distances(const DistanceBlock& block, double* out) noexcept;

}  // namespace cst::kernels
