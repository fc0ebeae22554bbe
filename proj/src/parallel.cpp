#include "tvvar/parallel.hpp"

#include <cstdlib>
#include <string>

namespace tvvar {

namespace {
std::atomic<std::size_t> g_workers{0};
}

std::size_t default_workers() {
  if (const std::size_t w = g_workers.load(); w > 0) return w;
  if (const char* env = std::getenv("TVVAR_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void set_default_workers(std::size_t workers) { g_workers.store(workers); }

}  // namespace tvvar
