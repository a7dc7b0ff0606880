#pragma once

#include <cstddef>
#include <exception>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gkp {

/// Runs body(i) for i in [0, count). workers <= 1 selects the serial
/// reference path; otherwise iterations are distributed across an OpenMP
/// dynamic-schedule loop. Bodies must be independent (sweep cells are); the
/// first exception thrown by any iteration is rethrown after the loop so the
/// two paths are observably identical.
inline void parallel_for(std::size_t count, unsigned workers,
                         const std::function<void(std::size_t)>& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
#ifdef _OPENMP
  std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(workers))
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(gkp_parallel_for_error)
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
#else
  for (std::size_t i = 0; i < count; ++i) body(i);
#endif
}

}  // namespace gkp
