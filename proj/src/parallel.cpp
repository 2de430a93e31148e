#include "dcg/parallel.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dcg::parallel {

namespace {

std::atomic<int> g_threads{0};

int env_threads() {
  const char* s = std::getenv("DCG_SIM_THREADS");
  if (!s || !*s) return 0;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || v < 1 || v > 4096) return 0;
  return static_cast<int>(v);
}

}

int thread_count() {
  int n = g_threads.load(std::memory_order_relaxed);
  if (n > 0) return n;
  n = env_threads();
  if (n > 0) return n;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int n) {
  g_threads.store(n > 0 ? n : 0, std::memory_order_relaxed);
}

bool use_parallel() {
#ifdef _OPENMP
  return thread_count() > 1;
#else
  return false;
#endif
}

}
