#include <atomic>
#include <cstdlib>
#include <cstring>

#include "cst/kernels/distance.hpp"

namespace cst::kernels {

namespace {

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("CST_FORCE_SCALAR"); env && std::strcmp(env, "0") != 0)
    return Isa::scalar;
  return detect_isa();
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa detect_isa() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_compiled() && __builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  // Advanced SIMD is mandatory on AArch64.
  if (neon_compiled()) return Isa::neon;
  return Isa::scalar;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) noexcept {
  const auto best = detect_isa();
  if (isa != Isa::scalar && isa != best) isa = Isa::scalar;
  active().store(isa, std::memory_order_relaxed);
}

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

void distances(const DistanceBlock& block, double* out) noexcept {
  switch (active_isa()) {
    case Isa::avx2: distances_avx2(block, out); return;
    case Isa::neon: distances_neon(block, out); return;
    case Isa::scalar: break;
  }
  distances_scalar(block, out);
}

}  // namespace cst::kernels
