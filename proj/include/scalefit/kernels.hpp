#pragma once

// Data-parallel inner loops shared by the analysis modules.
//
// Every kernel exists twice: `serial::` is the straightforward reference
// kept for tests and benchmarks, `parallel::` is the OpenMP version the
// library calls. Per-element kernels (block sums, lagged products, DWT
// steps) produce bit-identical output in both. Reductions in `parallel::`
// split the input into fixed kChunk-sized pieces and combine the partials
// in chunk order, so their result is independent of the thread count but
// may differ from the serial reference in the last few ulps.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace scalefit::kernels {

inline constexpr std::size_t kChunk = 4096;

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  void add(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace serial {

double sum(std::span<const double> x);

/// out[k] = sum of x[k*n .. k*n + n - 1] for k < floor(len/n).
void block_sums(std::span<const double> x, std::size_t n, std::span<double> out);

/// Returns S with S[r] = sum_i (x_i - center)^r for r = 0..max_power.
std::vector<double> centered_power_sums(std::span<const double> x, double center,
                                        int max_power);

/// Returns P with P[k] = sum_{i} x_i * x_{i+k} for k = 0..max_lag.
std::vector<double> lagged_products(std::span<const double> x, std::size_t max_lag);

/// One periodic analysis step: approx[k] = sum_i lo[i] x[(2k+i) mod n],
/// detail[k] = sum_i hi[i] x[(2k+i) mod n].
void filter_step(std::span<const double> x, std::span<const double> lo,
                 std::span<const double> hi, std::span<double> approx,
                 std::span<double> detail);

}  // namespace serial

namespace parallel {

double sum(std::span<const double> x);
void block_sums(std::span<const double> x, std::size_t n, std::span<double> out);
std::vector<double> centered_power_sums(std::span<const double> x, double center,
                                        int max_power);
std::vector<double> lagged_products(std::span<const double> x, std::size_t max_lag);
void filter_step(std::span<const double> x, std::span<const double> lo,
                 std::span<const double> hi, std::span<double> approx,
                 std::span<double> detail);

}  // namespace parallel

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads() noexcept;

/// Sets the OpenMP thread count; no-op without OpenMP.
void set_threads(int n) noexcept;

}  // namespace scalefit::kernels
