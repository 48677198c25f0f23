#pragma once

#include <cstddef>
#include <functional>

namespace fracwill {

// Worker count: hardware concurrency, capped by FRACWILL_THREADS when set.
int worker_count();

// Runs fn(i) for i in [0, count); each index writes only its own output slot,
// so results do not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace fracwill
