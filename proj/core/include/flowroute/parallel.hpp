#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace flowroute::detail {

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index is
/// visited exactly once; bodies must write disjoint outputs.
template <class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body) {
  if (count == 0) return;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) body(i);
  };
  const auto threads = static_cast<unsigned>(std::clamp<std::size_t>(jobs, 1, count));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace flowroute::detail
