#pragma once

#include <cstddef>
#include <functional>

namespace cst {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads (0 = one per hardware
/// thread). Work is handed out in small chunks from a shared counter; fn must
/// only write state owned by index i. The first exception thrown by any call
/// is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

[[nodiscard]] std::size_t resolve_jobs(std::size_t jobs) noexcept;

}  // namespace cst
