#include "rbgk/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace rbgk {

int resolve_thread_count(int requested, int configured) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RBGK_THREADS")) {
    const std::string_view s(env);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && ptr == s.data() + s.size() && value > 0) return value;
  }
  return configured > 0 ? configured : 1;
}

}  // namespace rbgk
