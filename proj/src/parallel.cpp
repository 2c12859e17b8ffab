#include "loopframe/parallel.hpp"

#include "loopframe/types.hpp"

namespace loopframe {

namespace {
std::atomic<int> requested{0};
}

void set_thread_count(int n) {
  if (n < 0) throw DomainError("thread count must be non-negative");
  requested = n;
}

int thread_count() {
  const int n = requested;
  if (n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace loopframe
