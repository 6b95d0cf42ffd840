#pragma once

#include <functional>
#include <vector>

#include "holocycle/base_system.hpp"

namespace holocycle {

/// Prefix-stable deterministic sample set: entry i is sys.sample_point(offset + i).
std::vector<BasePoint> sample_points(const BaseSystem& sys, int count, long offset = 0);

/// Runs fn(0..n-1) on up to `workers` threads.  Results must be written into
/// per-index slots by the callee; the schedule never affects the output.
void parallel_for(long n, int workers, const std::function<void(long)>& fn);

}  // namespace holocycle
