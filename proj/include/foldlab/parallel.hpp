#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace foldlab {

namespace detail {

// Runs task(i) for i in [0, count) on up to `workers` threads; the exception of
// the lowest failing index is rethrown after all threads join.
template <typename Task>
void run_indexed(std::size_t count, int workers, Task task) {
  std::vector<std::exception_ptr> errors(count);
  auto guarded = [&](std::size_t i) {
    try {
      task(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) guarded(i);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < count; i += threads) guarded(i);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Maps fixed-size chunks of [0, count) to partial results, then folds the
/// partials in chunk order. Chunking does not depend on the worker count, so
/// the reduction is reproducible for any `workers`.
template <typename T, typename MapChunk, typename Reduce>
T parallel_reduce(std::size_t count, int workers, T init, MapChunk map_chunk, Reduce reduce,
                  std::size_t chunk_size = 64) {
  const std::size_t chunks = (count + chunk_size - 1) / chunk_size;
  std::vector<T> partial(chunks, init);
  detail::run_indexed(chunks, workers, [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    partial[c] = map_chunk(begin, std::min(count, begin + chunk_size));
  });
  T acc = init;
  for (auto& p : partial) acc = reduce(std::move(acc), std::move(p));
  return acc;
}

/// Independent jobs, results returned in input order.
template <typename Result, typename Job>
std::vector<Result> parallel_map(std::size_t count, int workers, Job job) {
  std::vector<Result> out(count);
  detail::run_indexed(count, workers, [&](std::size_t i) { out[i] = job(i); });
  return out;
}

}  // namespace foldlab
