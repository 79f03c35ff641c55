#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scalefit/aggregate.hpp"

namespace scalefit {

inline constexpr int kMaxCumulantOrder = 6;
inline constexpr int kDefaultCumulantOrder = 4;

/// Unbiased k-statistics k_1 .. k_max_order (k_1 = mean, k_2 = unbiased
/// variance). Power sums are taken about the sample mean with compensated
/// accumulation. Requires size >= max_order + 1 and 1 <= max_order <= 6.
std::vector<double> sample_cumulants(std::span<const double> x, int max_order);

/// Empirical cumulant generating function log( mean(exp(t x)) ).
/// Throws Overflow when |t| * max|x| > 700.
double empirical_cgf(std::span<const double> x, double t);

/// When a cumulant cell is too small to take a logarithm of.
///
/// A cell of order m is unusable when
///   |k_m| < relative_floor * k_2^{m/2}, or (m != 2)
///   |k_m| < noise_sigmas * sqrt(m! / blocks) * k_2^{m/2}.
/// The second test compares k_m with its standard error under a Gaussian
/// null, where every cumulant above order two vanishes and the sample value
/// is pure estimation noise. noise_sigmas = 0 disables it.
struct UsabilityRule {
  double relative_floor = 1e-12;
  double noise_sigmas = 3.0;

  bool usable(double value, double k2, int order, std::size_t blocks) const;
};

/// Sample cumulants of every pyramid level.
class CumulantTable {
 public:
  CumulantTable() = default;
  CumulantTable(std::vector<int> orders, std::vector<std::size_t> scales,
                std::vector<std::size_t> block_counts, std::vector<std::vector<double>> values,
                std::vector<std::vector<bool>> usable);

  const std::vector<int>& orders() const noexcept { return orders_; }
  const std::vector<std::size_t>& scales() const noexcept { return scales_; }
  const std::vector<std::size_t>& block_counts() const noexcept { return block_counts_; }
  int max_order() const noexcept { return orders_.empty() ? 0 : orders_.back(); }

  double value(int order, std::size_t scale) const;
  bool usable(int order, std::size_t scale) const;

  /// Row-major by order: values()[m - 1][scale index].
  const std::vector<std::vector<double>>& values() const noexcept { return values_; }
  const std::vector<std::vector<bool>>& usable_flags() const noexcept { return usable_; }

 private:
  std::size_t scale_index(std::size_t scale) const;
  std::size_t order_index(int order) const;

  std::vector<int> orders_;
  std::vector<std::size_t> scales_;
  std::vector<std::size_t> block_counts_;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<bool>> usable_;
};

CumulantTable cumulant_scaling_table(const AggregatePyramid& pyramid,
                                     int max_order = kDefaultCumulantOrder,
                                     const UsabilityRule& rule = {});

}  // namespace scalefit
