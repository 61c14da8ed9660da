#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tonks {

/// Runs body(i) for i in [0, count) on up to `workers` threads.
///
/// Each index is processed exactly once; callers write results into slot i,
/// so the assembled output does not depend on scheduling. If several bodies
/// throw, the exception from the lowest index is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace tonks
