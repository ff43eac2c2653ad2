#pragma once

#include <atomic>
#include <cstddef>
#include <optional>
#include <thread>
#include <vector>

namespace licrit::detail {

// Deterministic parallel reduction: eval(i) produces the partial result of
// chunk i, and merge(partial, i) is invoked strictly in chunk order, so the
// final result is a fixed-tree reduction independent of the thread count.
template <typename Partial, typename Eval, typename Merge>
void chunked_reduce(std::size_t n_chunks, unsigned threads, Eval eval,
                    Merge merge) {
  if (threads <= 1 || n_chunks <= 1) {
    for (std::size_t i = 0; i < n_chunks; ++i) merge(eval(i), i);
    return;
  }
  std::vector<std::optional<Partial>> parts(n_chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n_chunks) break;
      parts[i].emplace(eval(i));
    }
  };
  std::vector<std::thread> pool;
  std::size_t nt = threads < n_chunks ? threads : n_chunks;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < n_chunks; ++i) merge(std::move(*parts[i]), i);
}

} // namespace licrit::detail
