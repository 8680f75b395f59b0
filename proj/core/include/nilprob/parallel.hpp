#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace nilprob {

/// Splits [0, n) into `chunks` contiguous ranges and runs fn(begin, end, chunk)
/// on up to `threads` workers. Chunk boundaries depend only on n and chunks,
/// so per-chunk results reduced in chunk order are thread-count independent.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t chunks, unsigned threads, Fn&& fn) {
  chunks = std::max<std::size_t>(1, std::min(chunks, std::max<std::size_t>(n, 1)));
  const auto bounds = [&](std::size_t c) { return n * c / chunks; };
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (threads == 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(bounds(c), bounds(c + 1), c);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t c = t; c < chunks; c += threads) fn(bounds(c), bounds(c + 1), c);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace nilprob
