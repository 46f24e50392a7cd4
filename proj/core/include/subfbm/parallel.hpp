#pragma once

#include <cstddef>
#include <functional>

namespace subfbm {

/// Worker count from SUBFBM_PARALLELISM; all hardware threads when unset.
/// Throws DomainError if the variable is set to anything but a positive integer.
std::size_t parallelism_from_environment();

/// Resolves a requested worker count: 0 means "ask the environment".
std::size_t resolve_parallelism(std::size_t requested);

/// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks must
/// write only to index-owned output, which makes results independent of the
/// worker count. The first exception thrown by a task is rethrown.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

}  // namespace subfbm
