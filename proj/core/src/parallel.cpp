#include "grouplim/parallel.hpp"

#include <cstdlib>
#include <string>

namespace grouplim {
namespace {

unsigned default_threads() {
  if (const char* env = std::getenv("GROUPLIM_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1u;
}

std::atomic<unsigned>& threads_setting() {
  static std::atomic<unsigned> value{default_threads()};
  return value;
}

}  // namespace

unsigned thread_count() { return threads_setting().load(std::memory_order_relaxed); }

void set_thread_count(unsigned n) { threads_setting().store(n ? n : 1u, std::memory_order_relaxed); }

}  // namespace grouplim
