#include "subfbm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "subfbm/errors.hpp"

namespace subfbm {

std::size_t parallelism_from_environment() {
  const char* raw = std::getenv("SUBFBM_PARALLELISM");
  if (raw == nullptr || *raw == '\0') {
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  const std::string_view text(raw);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
    throw DomainError("SUBFBM_PARALLELISM must be a positive integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

std::size_t resolve_parallelism(std::size_t requested) {
  return requested == 0 ? parallelism_from_environment() : requested;
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  std::vector<std::jthread> threads;
  threads.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(worker);
  worker();
  threads.clear();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace subfbm
