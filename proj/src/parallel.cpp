#include "patchlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace patchlab {

namespace {
std::atomic<std::size_t> g_threads{0};
}

void set_thread_count(std::size_t n) { g_threads.store(n); }

std::size_t thread_count() {
  if (const std::size_t n = g_threads.load(); n > 0) return n;
  if (const char* env = std::getenv("PATCHLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace patchlab
