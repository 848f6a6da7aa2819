#pragma once

#include <cstddef>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace circlelab {

// Execution policy for the data-parallel kernels. Every kernel writes one
// result slot per item and reduces serially in index order, so both policies
// produce bitwise identical output.
enum class Exec { serial, parallel };

inline const char* exec_name(Exec e) { return e == Exec::serial ? "serial" : "parallel"; }

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Calls f(i) for i in [0, n). If any call throws, the exception from the
// lowest failing index is rethrown after the loop.
template <class F>
void for_each_index(Exec exec, std::size_t n, F&& f) {
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::size_t first_bad = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      f(i);
    } catch (...) {
#pragma omp critical(circlelab_for_each_index)
      {
        if (i < first_bad) {
          first_bad = i;
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace circlelab
