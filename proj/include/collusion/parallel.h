#ifndef COLLUSION_PARALLEL_H_
#define COLLUSION_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace collusion {

// Worker count: hardware concurrency, capped by COLLUSION_THREADS when set.
std::size_t WorkerCount();

// Runs body(i) for i in [0, count) over WorkerCount() threads. The first
// exception thrown by any task is rethrown after all workers join.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace collusion

#endif  // COLLUSION_PARALLEL_H_
