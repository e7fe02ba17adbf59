#include "iqcc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace iqcc {

namespace {
constexpr std::size_t kChunkSize = 4096;
}

int thread_count() {
  if (const char* env = std::getenv("IQCC_THREADS"); env != nullptr && *env != '\0') {
    try {
      return std::max(1, std::stoi(env));
    } catch (...) {
      return 1;
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::size_t chunk_count(std::size_t n) { return n == 0 ? 0 : (n + kChunkSize - 1) / kChunkSize; }

void for_each_chunk(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t chunks = chunk_count(n);
  const auto run = [&](std::size_t c) { body(c, c * kChunkSize, std::min(n, (c + 1) * kChunkSize)); };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) run(c);
    });
  }
}

}  // namespace iqcc
