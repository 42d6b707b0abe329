#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace hmono {

// Runs fn(i) for i in [0, count) sharded across worker threads.  Each trial
// must be independent (callers derive a per-trial RNG seed), so results are
// identical for any worker count; merging is the caller's job via the
// per-shard accumulators it captures.
inline void for_each_trial_sharded(int count,
                                   const std::function<void(int shard, int i)>& fn,
                                   int workers = 0) {
  if (count <= 0) return;
  int w = workers > 0 ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  w = std::clamp(w, 1, 8);
  w = std::min(w, count);
  if (w == 1) {
    for (int i = 0; i < count; ++i) fn(0, i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int s = 0; s < w; ++s) {
    const int begin = static_cast<int>(static_cast<long long>(count) * s / w);
    const int end =
        static_cast<int>(static_cast<long long>(count) * (s + 1) / w);
    pool.emplace_back([&fn, s, begin, end] {
      for (int i = begin; i < end; ++i) fn(s, i);
    });
  }
  for (auto& th : pool) th.join();
}

inline int shard_count(int count, int workers = 0) {
  if (count <= 0) return 0;
  int w = workers > 0 ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  return std::min(std::clamp(w, 1, 8), count);
}

}  // namespace hmono
