#include "hypop/util.hpp"

#include <cstdlib>
#include <thread>

namespace hypop {

int default_thread_budget() {
  if (const char* env = std::getenv("HYPOP_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace hypop
