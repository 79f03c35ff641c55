#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace scalefit {

/// Seeded 64-bit Mersenne Twister (MT19937-64) with portable variate
/// transforms. The engine's output sequence is fixed by the C++ standard; the
/// transforms below are written out here because std::*_distribution
/// implementations differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform();

  /// Standard normal via Box-Muller; the second variate of each pair is
  /// cached and returned by the next call.
  double normal();

  /// Gamma(shape, 1) by Marsaglia-Tsang squeeze; shape < 1 uses the
  /// U^(1/shape) boost.
  double gamma(double shape);

  /// Symmetric Beta(a, a) as G1 / (G1 + G2); always strictly inside (0, 1).
  double beta_symmetric(double a);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace scalefit
