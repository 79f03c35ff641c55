#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scalefit/trace.hpp"

namespace scalefit {

/// Minimum number of blocks a pyramid level must keep.
inline constexpr std::size_t kMinBlocks = 8;

/// Non-overlapping block sums of size n. Block k (1-based) covers source
/// samples (k-1)n+1 .. kn; trailing samples that do not fill a block are
/// dropped.
std::vector<double> aggregate(std::span<const double> x, std::size_t n);
inline std::vector<double> aggregate(const Trace& trace, std::size_t n) {
  return aggregate(trace.view(), n);
}

/// The aggregated series X^(n) for an ascending set of block sizes.
class AggregatePyramid {
 public:
  AggregatePyramid(std::vector<std::size_t> scales, std::vector<std::vector<double>> levels,
                   std::size_t source_length);

  const std::vector<std::size_t>& scales() const noexcept { return scales_; }
  std::size_t source_length() const noexcept { return source_length_; }
  std::size_t size() const noexcept { return scales_.size(); }

  /// Series at scale n; throws Domain when n is not in the pyramid.
  const std::vector<double>& at(std::size_t n) const;
  const std::vector<double>& level(std::size_t index) const { return levels_.at(index); }

 private:
  std::vector<std::size_t> scales_;
  std::vector<std::vector<double>> levels_;
  std::size_t source_length_;
};

/// Builds X^(n) for every requested scale (sorted, duplicates removed).
/// Every scale must leave at least kMinBlocks blocks.
AggregatePyramid build_pyramid(std::span<const double> x, std::vector<std::size_t> scales);
inline AggregatePyramid build_pyramid(const Trace& trace, std::vector<std::size_t> scales) {
  return build_pyramid(trace.view(), std::move(scales));
}

/// Default dyadic scales 2^0 .. 2^(floor(log2 N) - 3).
std::vector<std::size_t> dyadic_scales(std::size_t length);

}  // namespace scalefit
