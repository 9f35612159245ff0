#include "threads.hh"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace sh {

int thread_budget() {
  static const int budget = [] {
    if (const char* env = std::getenv("SCHECHTER_HEAT_THREADS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1) return static_cast<int>(std::min(v, 64L));
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
  }();
  return budget;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_budget()), count);
  if (workers <= 1) {
    if (count > 0) chunk_fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t base = count / workers, extra = count % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    pool.emplace_back(chunk_fn, begin, begin + len);
    begin += len;
  }
  for (auto& t : pool) t.join();
}

}  // namespace sh
