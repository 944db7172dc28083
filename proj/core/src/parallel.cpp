#include "photonstats/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace photonstats::parallel {

namespace {

std::atomic<unsigned> g_max_threads{0};
// Set inside a parallel region so nested loops run inline instead of
// spawning threads per outer item.
thread_local bool t_in_region = false;

struct RegionFlag {
  bool saved = t_in_region;
  RegionFlag() { t_in_region = true; }
  ~RegionFlag() { t_in_region = saved; }
};

unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

void set_max_threads(unsigned threads) { g_max_threads.store(threads); }

unsigned max_threads() {
  const unsigned t = g_max_threads.load();
  return t == 0 ? default_threads() : t;
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t workers =
      t_in_region ? 1 : std::min<std::size_t>(max_threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    const RegionFlag flag;
    try {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

Complex pairwise_sum(const std::vector<Complex>& values) {
  if (values.empty()) return {0.0, 0.0};
  std::vector<Complex> level = values;
  while (level.size() > 1) {
    std::vector<Complex> up((level.size() + 1) / 2);
    for (std::size_t i = 0; i < up.size(); ++i) {
      up[i] = 2 * i + 1 < level.size() ? level[2 * i] + level[2 * i + 1] : level[2 * i];
    }
    level.swap(up);
  }
  return level.front();
}

Complex deterministic_sum(std::size_t count, const std::function<Complex(std::size_t)>& term) {
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<Complex> partial(blocks);
  for_each_index(blocks, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(count, lo + kBlock);
    Complex s{0.0, 0.0};
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[b] = s;
  });
  return pairwise_sum(partial);
}

}  // namespace photonstats::parallel
