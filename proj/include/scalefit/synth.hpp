#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scalefit/trace.hpp"

namespace scalefit {

/// Fractional Gaussian noise X(k) = B_H(k+1) - B_H(k).
struct FgnSpec {
  double hurst = 0.7;
  std::size_t length = 1 << 16;  // 2^J, J >= 4
  double variance = 1.0;         // sigma^2 = Var X(k)
  std::uint64_t seed = 0;

  void validate() const;
};

/// Conservative binomial cascade on 2^depth dyadic cells. Each split sends
/// fractions (W, 1 - W) of the parent mass to the two children with
/// W ~ Beta(a, a). `equal_split` (or an infinite multiplier_param) is the
/// a -> infinity limit W = 1/2.
struct CascadeSpec {
  unsigned depth = 16;
  double multiplier_param = 2.0;
  double total_mass = 1.0;
  std::uint64_t seed = 0;
  bool equal_split = false;

  bool degenerate() const noexcept;
  void validate() const;
};

/// Closed-form fGn autocovariance
/// gamma(k) = sigma^2/2 (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}).
double fgn_autocovariance(double hurst, double variance, std::size_t lag);

/// Exact fGn synthesis by circulant embedding of the covariance sequence
/// (Davies-Harte). Throws Synthesis when the embedding has an eigenvalue
/// below -1e-8 * max; smaller negative values are clamped to zero.
Trace generate_fgn(const FgnSpec& spec);

/// Breadth-first conservative cascade, 2^depth non-negative samples summing
/// to total_mass.
Trace generate_cascade(const CascadeSpec& spec);

/// Cascade-modulated fGn: X(k) = X_fgn(k) * sqrt(N * mu(k)) with mu the
/// cascade normalized to unit mass. E[mu(k)] = 1/N, so the modulation keeps
/// the expected energy. Requires fgn.length == 2^cascade.depth.
Trace generate_multifractal(const FgnSpec& fgn, const CascadeSpec& cascade);

/// Cumulative process Y(k) = sum_{i <= k} X(i).
Trace partial_sums(const Trace& trace);

/// Sample autocovariance at lags 0..max_lag normalized by N - k. With
/// subtract_mean = false the process mean is taken to be zero, which avoids
/// the mean-estimation bias that long-range dependence makes large.
std::vector<double> sample_autocovariance(std::span<const double> x, std::size_t max_lag,
                                          bool subtract_mean = false);

}  // namespace scalefit
