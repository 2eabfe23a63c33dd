#include "spectra/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace spectra {
namespace {

std::atomic<std::size_t> g_override{0};

}  // namespace

std::size_t worker_count() {
  if (const std::size_t o = g_override.load()) return o;
  if (const char* env = std::getenv("SPECTRA_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void set_worker_count(std::size_t n) { g_override.store(n); }

}  // namespace spectra
