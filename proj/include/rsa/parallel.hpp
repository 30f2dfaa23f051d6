#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace rsa {

/// Run produce(i) for i in [0, count) on `threads` workers and hand the
/// results to consume(i, result) strictly in index order, so reductions do
/// not depend on scheduling. Work proceeds in chunks to bound memory.
template <typename Produce, typename Consume>
void for_each_replica(std::size_t count, unsigned threads, Produce produce, Consume consume) {
  using Result = decltype(produce(std::size_t{0}));
  threads = std::max(1u, threads);
  const std::size_t chunk = static_cast<std::size_t>(threads) * 4;

  for (std::size_t begin = 0; begin < count; begin += chunk) {
    const std::size_t end = std::min(count, begin + chunk);
    std::vector<std::optional<Result>> results(end - begin);
    std::vector<std::exception_ptr> errors(threads);

    auto work = [&](unsigned worker) {
      try {
        for (std::size_t i = begin + worker; i < end; i += threads) results[i - begin].emplace(produce(i));
      } catch (...) {
        errors[worker] = std::current_exception();
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (std::size_t i = begin; i < end; ++i) consume(i, std::move(*results[i - begin]));
  }
}

}  // namespace rsa
