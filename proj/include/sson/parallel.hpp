#pragma once

#include <functional>

namespace sson {

/// Worker count: min(requested or hardware concurrency, SSON_THREADS when the
/// environment variable is set). Always at least 1.
int worker_count(int requested = 0);

/// Runs fn(0..n-1) on up to `threads` workers. Tasks must write to disjoint
/// state; the merged result is then independent of scheduling order.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace sson
