#include "helmprec/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace helmprec {

namespace {

std::size_t read_env_threads() {
  const char* raw = std::getenv("HELMPREC_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  std::string_view text(raw);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) {
    throw std::invalid_argument("HELMPREC_THREADS must be a positive integer, got '" +
                                std::string(text) + "'");
  }
  return static_cast<std::size_t>(value);
}

std::atomic<std::size_t>& thread_slot() {
  static std::atomic<std::size_t> slot{0};
  return slot;
}

}  // namespace

std::size_t thread_count() {
  auto& slot = thread_slot();
  std::size_t n = slot.load();
  if (n == 0) {
    n = read_env_threads();
    slot.store(n);
  }
  return n;
}

void set_thread_count(std::size_t n) {
  if (n == 0) throw std::invalid_argument("thread count must be positive");
  thread_slot().store(n);
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t threads = std::min(thread_count(), n);
  if (threads <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 1; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(n, chunk));
  for (auto& th : pool) th.join();
}

}  // namespace helmprec
