#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scalefit {

/// Generation record attached to every trace.
struct TraceMeta {
  std::string model;                         // "fgn", "cascade", "multifractal", ...
  std::map<std::string, std::string> params; // spec echo, values in round-trip text form
  std::optional<std::uint64_t> seed;
  std::string created;                       // ISO-8601 UTC

  bool operator==(const TraceMeta&) const = default;
};

/// Finite increment series X(k) plus its generation record.
struct Trace {
  std::vector<double> samples;
  TraceMeta meta;

  std::size_t size() const noexcept { return samples.size(); }
  std::span<const double> view() const noexcept { return samples; }

  /// Throws InvalidSpec when empty or when any sample is NaN/infinite.
  void validate() const;
};

/// Creation timestamp for metadata. When SCALEFIT_FIXED_CLOCK is set its
/// value is returned verbatim, which makes sidecars and manifests
/// reproducible byte for byte.
std::string creation_timestamp();

inline constexpr const char* kFixedClockEnv = "SCALEFIT_FIXED_CLOCK";

bool is_power_of_two(std::size_t n) noexcept;

/// floor(log2 n) for n >= 1.
unsigned floor_log2(std::size_t n) noexcept;

}  // namespace scalefit
