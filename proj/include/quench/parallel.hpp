#pragma once

#include <cstddef>
#include <functional>

namespace quench {

// Runs body(i) for i in [0, count) on a pool of `workers` threads (0 = hardware
// concurrency). Tasks are claimed from a shared counter; each task must write
// only to its own output slot so results do not depend on the schedule.
// The first exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

int resolve_workers(int workers);

}  // namespace quench
