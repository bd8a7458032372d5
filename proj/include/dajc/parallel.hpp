#pragma once

#include <functional>

namespace dajc {

// Worker count: DAJC_THREADS when set (values < 1 clamp to 1), otherwise
// hardware concurrency.
int thread_budget();

// Runs fn(0..n-1) across up to thread_budget() workers. Call order across
// workers is unspecified; fn must be thread-safe. Exceptions propagate to the
// caller (first one wins).
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace dajc
