#include "goom/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <thread>

namespace goom {

int default_workers() noexcept {
  if (const char* env = std::getenv("GOOM_WORKERS")) {
    int value = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec == std::errc{} && ptr == end && value > 0) return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace goom
