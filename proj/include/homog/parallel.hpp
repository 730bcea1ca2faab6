#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace homog {

// Static-partition parallel for. Tasks write results into caller-owned slots
// indexed by task id; reductions then run in index order, so outputs are
// identical for any worker count.
template <typename Fn>
void parallel_for(std::size_t n_tasks, int workers, Fn&& fn) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  std::size_t w = static_cast<std::size_t>(workers);
  if (w > n_tasks) w = n_tasks == 0 ? 1 : n_tasks;
  if (w <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  std::exception_ptr err = nullptr;
  std::mutex err_mu;
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n_tasks; i += w) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace homog
