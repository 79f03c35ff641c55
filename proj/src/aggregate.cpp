#include "scalefit/aggregate.hpp"

#include <algorithm>
#include <string>

#include "scalefit/error.hpp"
#include "scalefit/kernels.hpp"

namespace scalefit {

std::vector<double> aggregate(std::span<const double> x, std::size_t n) {
  if (n < 1) fail(ErrorKind::Domain, "aggregation block size must be >= 1");
  if (n > x.size()) {
    fail(ErrorKind::InsufficientData, "aggregation block size " + std::to_string(n) +
                                          " exceeds trace length " + std::to_string(x.size()));
  }
  std::vector<double> out(x.size() / n);
  kernels::parallel::block_sums(x, n, out);
  return out;
}

AggregatePyramid::AggregatePyramid(std::vector<std::size_t> scales,
                                   std::vector<std::vector<double>> levels,
                                   std::size_t source_length)
    : scales_(std::move(scales)), levels_(std::move(levels)), source_length_(source_length) {}

const std::vector<double>& AggregatePyramid::at(std::size_t n) const {
  const auto it = std::lower_bound(scales_.begin(), scales_.end(), n);
  if (it == scales_.end() || *it != n) {
    fail(ErrorKind::Domain, "scale " + std::to_string(n) + " is not in the pyramid");
  }
  return levels_[static_cast<std::size_t>(it - scales_.begin())];
}

AggregatePyramid build_pyramid(std::span<const double> x, std::vector<std::size_t> scales) {
  if (scales.empty()) fail(ErrorKind::Domain, "pyramid needs at least one scale");
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  if (scales.front() < 1) fail(ErrorKind::Domain, "pyramid scales must be >= 1");
  for (std::size_t n : scales) {
    if (x.size() / n < kMinBlocks) {
      fail(ErrorKind::InsufficientData,
           "scale " + std::to_string(n) + " leaves " + std::to_string(x.size() / n) +
               " blocks of a length-" + std::to_string(x.size()) + " trace (need >= 8)");
    }
  }
  std::vector<std::vector<double>> levels;
  levels.reserve(scales.size());
  for (std::size_t n : scales) levels.push_back(aggregate(x, n));
  return AggregatePyramid(std::move(scales), std::move(levels), x.size());
}

std::vector<std::size_t> dyadic_scales(std::size_t length) {
  if (length < kMinBlocks) {
    fail(ErrorKind::InsufficientData, "trace of length " + std::to_string(length) +
                                          " is too short for a pyramid");
  }
  const unsigned top = floor_log2(length) - 3;
  std::vector<std::size_t> scales;
  for (unsigned j = 0; j <= top; ++j) scales.push_back(std::size_t{1} << j);
  return scales;
}

}  // namespace scalefit
