#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace ihp {

// Worker count comes from IHP_THREADS; unset or invalid means serial.
inline int env_threads() {
  const char* s = std::getenv("IHP_THREADS");
  if (!s) return 1;
  const int t = std::atoi(s);
  if (t <= 1) return 1;
  return t > 64 ? 64 : t;
}

// Runs fn(trial) for every trial index.  Callers keep results in
// trial-indexed storage and reduce afterwards, so outputs do not depend on
// the worker count.
template <typename F>
void for_each_trial(long long trials, F&& fn) {
  const int nt = env_threads();
  if (nt == 1 || trials < 2 * nt) {
    for (long long i = 0; i < trials; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> workers;
  workers.reserve(nt);
  for (int w = 0; w < nt; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const long long i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= trials) break;
        fn(i);
      }
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace ihp
