#include "scalefit/kernels.hpp"

#include <algorithm>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scalefit::kernels {

namespace {

using Index = std::ptrdiff_t;

Index as_index(std::size_t n) { return static_cast<Index>(n); }

CompensatedSum sum_range(std::span<const double> x) {
  CompensatedSum acc;
  for (double v : x) acc.add(v);
  return acc;
}

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

void power_sums_range(std::span<const double> x, double center, int max_power,
                      std::span<CompensatedSum> acc) {
  for (double v : x) {
    const double d = v - center;
    double p = 1.0;
    for (int r = 0; r <= max_power; ++r) {
      acc[static_cast<std::size_t>(r)].add(p);
      p *= d;
    }
  }
}

double lag_product(std::span<const double> x, std::size_t lag) {
  CompensatedSum acc;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i + lag < n; ++i) acc.add(x[i] * x[i + lag]);
  return acc.value();
}

void filter_one(std::span<const double> x, std::span<const double> lo,
                std::span<const double> hi, std::size_t k, double& a, double& d) {
  const std::size_t n = x.size();
  double sa = 0.0;
  double sd = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const double v = x[(2 * k + i) % n];
    sa += lo[i] * v;
    sd += hi[i] * v;
  }
  a = sa;
  d = sd;
}

}  // namespace

namespace serial {

double sum(std::span<const double> x) { return sum_range(x).value(); }

void block_sums(std::span<const double> x, std::size_t n, std::span<double> out) {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = sum_range(x.subspan(k * n, n)).value();
}

std::vector<double> centered_power_sums(std::span<const double> x, double center,
                                        int max_power) {
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(max_power) + 1);
  power_sums_range(x, center, max_power, acc);
  std::vector<double> out(acc.size());
  std::transform(acc.begin(), acc.end(), out.begin(), [](const auto& a) { return a.value(); });
  return out;
}

std::vector<double> lagged_products(std::span<const double> x, std::size_t max_lag) {
  std::vector<double> out(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) out[k] = lag_product(x, k);
  return out;
}

void filter_step(std::span<const double> x, std::span<const double> lo,
                 std::span<const double> hi, std::span<double> approx,
                 std::span<double> detail) {
  for (std::size_t k = 0; k < approx.size(); ++k) filter_one(x, lo, hi, k, approx[k], detail[k]);
}

}  // namespace serial

namespace parallel {

double sum(std::span<const double> x) {
  const std::size_t chunks = chunk_count(x.size());
  std::vector<CompensatedSum> partial(chunks);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < as_index(chunks); ++c) {
    const auto begin = static_cast<std::size_t>(c) * kChunk;
    partial[static_cast<std::size_t>(c)] =
        sum_range(x.subspan(begin, std::min(kChunk, x.size() - begin)));
  }
  CompensatedSum total;
  for (const auto& p : partial) total.add(p);
  return total.value();
}

void block_sums(std::span<const double> x, std::size_t n, std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < as_index(out.size()); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    out[kk] = sum_range(x.subspan(kk * n, n)).value();
  }
}

std::vector<double> centered_power_sums(std::span<const double> x, double center,
                                        int max_power) {
  const std::size_t terms = static_cast<std::size_t>(max_power) + 1;
  const std::size_t chunks = chunk_count(x.size());
  std::vector<CompensatedSum> partial(chunks * terms);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < as_index(chunks); ++c) {
    const auto cc = static_cast<std::size_t>(c);
    const auto begin = cc * kChunk;
    power_sums_range(x.subspan(begin, std::min(kChunk, x.size() - begin)), center, max_power,
                     std::span(partial).subspan(cc * terms, terms));
  }
  std::vector<CompensatedSum> total(terms);
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t r = 0; r < terms; ++r) total[r].add(partial[c * terms + r]);
  }
  std::vector<double> out(terms);
  std::transform(total.begin(), total.end(), out.begin(), [](const auto& a) { return a.value(); });
  return out;
}

std::vector<double> lagged_products(std::span<const double> x, std::size_t max_lag) {
  std::vector<double> out(max_lag + 1);
#pragma omp parallel for schedule(dynamic, 1)
  for (Index k = 0; k <= as_index(max_lag); ++k) {
    out[static_cast<std::size_t>(k)] = lag_product(x, static_cast<std::size_t>(k));
  }
  return out;
}

void filter_step(std::span<const double> x, std::span<const double> lo,
                 std::span<const double> hi, std::span<double> approx,
                 std::span<double> detail) {
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < as_index(approx.size()); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    filter_one(x, lo, hi, kk, approx[kk], detail[kk]);
  }
}

}  // namespace parallel

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) noexcept {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace scalefit::kernels
