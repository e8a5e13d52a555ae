#include "apblow/quadrature.hpp"

#include <algorithm>
#include <cstdlib>

namespace apblow {

int worker_threads() {
  static const int cached = [] {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int cap = std::min(hw, 8);
    if (const char* env = std::getenv("APBLOW_THREADS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1) cap = std::min<long>(v, hw) > 0 ? static_cast<int>(std::min<long>(v, hw)) : 1;
    }
    return std::max(1, cap);
  }();
  return cached;
}

}  // namespace apblow
