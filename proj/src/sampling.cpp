#include "holocycle/sampling.hpp"

#include <exception>
#include <mutex>

#ifdef HOLOCYCLE_HAVE_OPENMP
#include <omp.h>
#endif

namespace holocycle {

std::vector<BasePoint> sample_points(const BaseSystem& sys, int count, long offset) {
  std::vector<BasePoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(sys.sample_point(offset + i));
  return out;
}

void parallel_for(long n, int workers, const std::function<void(long)>& fn) {
  if (n <= 0) return;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  auto guarded = [&](long i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
#ifdef HOLOCYCLE_HAVE_OPENMP
  if (workers > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long i = 0; i < n; ++i) guarded(i);
  } else {
    for (long i = 0; i < n; ++i) guarded(i);
  }
#else
  (void)workers;
  for (long i = 0; i < n; ++i) guarded(i);
#endif
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace holocycle
