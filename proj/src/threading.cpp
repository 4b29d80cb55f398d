#include "axmhd/threading.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace axmhd {

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int n) { g_threads = std::clamp(n, 1, 256); }

int num_threads() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const int nt = num_threads();
  if (nt <= 1 || n < 64) {
    body(0, n);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(nt), n);
  const std::size_t per = (n + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t b = c * per;
    const std::size_t e = std::min(n, b + per);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& t : pool) t.join();
}

} // namespace axmhd
