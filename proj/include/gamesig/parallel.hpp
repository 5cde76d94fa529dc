#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gamesig {

// Execution mode for the seed-sweep kernels. Serial is the reference path:
// it runs the exact same per-item work in index order and must produce
// bit-identical results to the OpenMP path (items write only to their own
// result slot and own their RNG streams).
enum class ExecMode { Serial, OpenMP };

// Apply fn(i) for i in [0, count). Exceptions thrown by items are captured
// and the first one (lowest index wins on the serial path, arbitrary on the
// parallel path) is rethrown after the loop joins.
template <typename Fn>
void parallel_for_index(std::size_t count, ExecMode mode, Fn&& fn) {
  if (mode == ExecMode::Serial) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error = nullptr;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace gamesig
