#pragma once

#include <cstddef>
#include <functional>

namespace sh {

// Worker budget: SCHECHTER_HEAT_THREADS if set (clamped to [1, 64]),
// otherwise the hardware concurrency. Read once per process.
int thread_budget();

// Splits [0, count) into contiguous chunks, one worker per chunk. Results
// must be written to disjoint slots; reductions are combined by the caller
// in index order so the outcome does not depend on the budget.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& chunk_fn);

}  // namespace sh
