#include "twinbeam/parallel.hpp"

#include <cstdlib>
#include <string>

namespace twinbeam {

Executor Executor::from_environment() {
  if (const char* env = std::getenv("TWINBEAM_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return Executor(static_cast<unsigned>(v));
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return Executor(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace twinbeam
