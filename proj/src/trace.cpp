#include "scalefit/trace.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>

#include "scalefit/error.hpp"

namespace scalefit {

void Trace::validate() const {
  if (samples.empty()) fail(ErrorKind::InvalidSpec, "trace is empty");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      fail(ErrorKind::InvalidSpec, "trace sample " + std::to_string(i + 1) + " is not finite");
    }
  }
}

std::string creation_timestamp() {
  if (const char* fixed = std::getenv(kFixedClockEnv); fixed != nullptr && *fixed != '\0') {
    return fixed;
  }
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

unsigned floor_log2(std::size_t n) noexcept {
  unsigned j = 0;
  while (n > 1) {
    n >>= 1;
    ++j;
  }
  return j;
}

}  // namespace scalefit
