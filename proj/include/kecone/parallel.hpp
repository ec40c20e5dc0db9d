#pragma once

#include <cstddef>
#include <exception>

#ifdef KECONE_HAVE_OPENMP
#include <omp.h>
#endif

namespace kecone::par {

// Process-wide switch between the OpenMP kernels and the serial
// reference path. Sample-point loops aggregate order-independently
// (max reductions), so both paths produce identical results.
inline bool& parallel_enabled() {
  static bool enabled = true;
  return enabled;
}

inline int hardware_threads() {
#ifdef KECONE_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Runs body(i) for i in [0, count). The first exception thrown by any
// iteration is rethrown on the calling thread.
template <typename F>
void for_each_index(std::size_t count, F&& body) {
#ifdef KECONE_HAVE_OPENMP
  if (parallel_enabled()) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(kecone_par_err)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#endif
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace kecone::par
