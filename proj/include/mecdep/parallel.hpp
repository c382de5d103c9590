#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>

namespace mecdep {

/// Worker count: MEC_DEPEND_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index is visited once;
/// callers write results by index so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mecdep
