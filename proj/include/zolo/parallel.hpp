#pragma once

#include <cstddef>
#include <functional>

namespace zolo {

/// Worker count: ZS_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Calls body(i) for i in [0, count) on up to thread_count() threads. Work
/// items are claimed from a shared counter, so callers that write results
/// into slot i get a deterministic layout. The first exception thrown by any
/// body is rethrown after all threads have joined.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace zolo
