#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace mmgrad {

/// Worker count: hardware concurrency, capped by MMGRAD_THREADS when set.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MMGRAD_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

struct ArgMax {
  double value = -1.0;
  std::size_t index = static_cast<std::size_t>(-1);
};

/// Deterministic arg-max over [0, count): ties resolve to the smallest index,
/// independent of the number of workers.
inline ArgMax parallel_argmax(std::size_t count, const std::function<double(std::size_t)>& score) {
  const unsigned workers = count < 4096 ? 1u : worker_count();
  std::vector<ArgMax> partial(workers);
  auto run = [&](unsigned w) {
    const std::size_t lo = count * w / workers;
    const std::size_t hi = count * (w + 1) / workers;
    ArgMax best;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = score(i);
      if (best.index == static_cast<std::size_t>(-1) || v > best.value) best = {v, i};
    }
    partial[w] = best;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  ArgMax best;
  for (const auto& p : partial) {
    if (p.index == static_cast<std::size_t>(-1)) continue;
    if (best.index == static_cast<std::size_t>(-1) || p.value > best.value) best = p;
  }
  return best;
}

}  // namespace mmgrad
