#pragma once

#include <cstdint>
#include <functional>

namespace swflow {

inline constexpr const char* kVersion = "0.1.0";

/// Cap on internal parallelism from SWFLOW_THREADS (default 1 = serial).
int thread_cap();

/// Runs fn(i) for i in [0, count), split across at most thread_cap() threads.
/// Work items must write to disjoint slots; results are independent of the
/// schedule.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace swflow
