#include "steerlat/threading.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>

namespace steerlat {

namespace {
std::atomic<int> g_override{0};
}

int thread_count() {
  int n = g_override.load(std::memory_order_relaxed);
  if (n > 0) return n;
  if (const char* env = std::getenv("STEERLAT_THREADS")) {
    int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  int hw = omp_get_max_threads();
  return hw > 0 ? hw : 1;
}

void set_thread_count(int n) {
  g_override.store(n > 0 ? n : 0, std::memory_order_relaxed);
}

}  // namespace steerlat
