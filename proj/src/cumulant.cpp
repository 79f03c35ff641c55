#include "scalefit/cumulant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scalefit/error.hpp"
#include "scalefit/kernels.hpp"
#include "scalefit/trace_io.hpp"

namespace scalefit {

namespace {

constexpr double kCgfExponentLimit = 700.0;

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<double> sample_cumulants(std::span<const double> x, int max_order) {
  if (max_order < 1 || max_order > kMaxCumulantOrder) {
    fail(ErrorKind::Domain, "cumulant order must be in 1..6, got " + std::to_string(max_order));
  }
  if (x.size() < static_cast<std::size_t>(max_order)) {
    fail(ErrorKind::InsufficientData,
         "order-" + std::to_string(max_order) + " k-statistics need at least " +
             std::to_string(max_order) + " samples, got " + std::to_string(x.size()));
  }
  std::vector<double> k(static_cast<std::size_t>(max_order), 0.0);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) {
    k[0] = *lo;
    return k;
  }

  const double n = static_cast<double>(x.size());
  const double mean = kernels::parallel::sum(x) / n;
  k[0] = mean;
  if (max_order == 1) return k;

  // Central moments m_r = S_r / n about the sample mean. S_1 is not exactly
  // zero in floating point; k-statistics are shift invariant, so the central
  // formulas below (which assume S_1 = 0) are still the right ones.
  const std::vector<double> s = kernels::parallel::centered_power_sums(x, mean, max_order);
  const double m2 = s[2] / n;
  k[1] = n / (n - 1.0) * m2;
  if (max_order >= 3) {
    const double m3 = s[3] / n;
    k[2] = n * n / ((n - 1.0) * (n - 2.0)) * m3;
    if (max_order >= 4) {
      const double m4 = s[4] / n;
      k[3] = n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) /
             ((n - 1.0) * (n - 2.0) * (n - 3.0));
      if (max_order >= 5) {
        const double m5 = s[5] / n;
        k[4] = n * n * n * ((n + 5.0) * m5 - 10.0 * (n - 1.0) * m2 * m3) /
               ((n - 1.0) * (n - 2.0) * (n - 3.0) * (n - 4.0));
        if (max_order >= 6) {
          const double m6 = s[6] / n;
          const double num = (n + 1.0) * (n * n + 15.0 * n - 4.0) * m6 -
                             15.0 * (n - 1.0) * (n - 1.0) * (n + 4.0) * m2 * m4 -
                             10.0 * (n - 1.0) * (n * n - n + 4.0) * m3 * m3 +
                             30.0 * n * (n - 1.0) * (n - 2.0) * m2 * m2 * m2;
          k[5] = n * n * num / ((n - 1.0) * (n - 2.0) * (n - 3.0) * (n - 4.0) * (n - 5.0));
        }
      }
    }
  }
  return k;
}

double empirical_cgf(std::span<const double> x, double t) {
  if (x.empty()) fail(ErrorKind::InsufficientData, "empirical CGF of an empty series");
  if (t == 0.0) return 0.0;
  double max_abs = 0.0;
  for (double v : x) max_abs = std::max(max_abs, std::abs(v));
  if (std::abs(t) * max_abs > kCgfExponentLimit) {
    fail(ErrorKind::Overflow, "|t| * max|x| = " + format_real(std::abs(t) * max_abs) +
                                  " exceeds the overflow guard 700");
  }
  double shift = t * x[0];
  for (double v : x) shift = std::max(shift, t * v);
  kernels::CompensatedSum acc;
  for (double v : x) acc.add(std::exp(t * v - shift));
  return std::log(acc.value() / static_cast<double>(x.size())) + shift;
}

bool UsabilityRule::usable(double value, double k2, int order, std::size_t blocks) const {
  if (!std::isfinite(value)) return false;
  const double unit = std::pow(std::max(k2, 0.0), 0.5 * order);
  double floor = relative_floor;
  if (order != 2 && noise_sigmas > 0.0 && blocks > 0) {
    floor = std::max(floor, noise_sigmas * std::sqrt(factorial(order) / static_cast<double>(blocks)));
  }
  return std::abs(value) >= floor * unit && value != 0.0;
}

CumulantTable::CumulantTable(std::vector<int> orders, std::vector<std::size_t> scales,
                             std::vector<std::size_t> block_counts,
                             std::vector<std::vector<double>> values,
                             std::vector<std::vector<bool>> usable)
    : orders_(std::move(orders)),
      scales_(std::move(scales)),
      block_counts_(std::move(block_counts)),
      values_(std::move(values)),
      usable_(std::move(usable)) {}

std::size_t CumulantTable::scale_index(std::size_t scale) const {
  const auto it = std::lower_bound(scales_.begin(), scales_.end(), scale);
  if (it == scales_.end() || *it != scale) {
    fail(ErrorKind::Domain, "scale " + std::to_string(scale) + " is not in the cumulant table");
  }
  return static_cast<std::size_t>(it - scales_.begin());
}

std::size_t CumulantTable::order_index(int order) const {
  if (order < 1 || order > max_order()) {
    fail(ErrorKind::Domain, "order " + std::to_string(order) + " is not in the cumulant table");
  }
  return static_cast<std::size_t>(order - 1);
}

double CumulantTable::value(int order, std::size_t scale) const {
  return values_[order_index(order)][scale_index(scale)];
}

bool CumulantTable::usable(int order, std::size_t scale) const {
  return usable_[order_index(order)][scale_index(scale)];
}

CumulantTable cumulant_scaling_table(const AggregatePyramid& pyramid, int max_order,
                                     const UsabilityRule& rule) {
  if (max_order < 1 || max_order > kMaxCumulantOrder) {
    fail(ErrorKind::Domain, "cumulant order must be in 1..6, got " + std::to_string(max_order));
  }
  const std::size_t orders = static_cast<std::size_t>(max_order);
  const std::size_t scales = pyramid.size();
  std::vector<std::vector<double>> values(orders, std::vector<double>(scales));
  std::vector<std::vector<bool>> usable(orders, std::vector<bool>(scales));
  std::vector<std::size_t> blocks(scales);

  for (std::size_t s = 0; s < scales; ++s) {
    const auto& level = pyramid.level(s);
    blocks[s] = level.size();
    // k_2 sets the scale of the usability floor even when only k_1 is asked for.
    const std::vector<double> k = sample_cumulants(level, std::max(max_order, 2));
    const double k2 = k[1];
    for (std::size_t m = 0; m < orders; ++m) {
      values[m][s] = k[m];
      usable[m][s] = rule.usable(k[m], k2, static_cast<int>(m) + 1, level.size());
    }
  }
  std::vector<int> order_list(orders);
  for (std::size_t m = 0; m < orders; ++m) order_list[m] = static_cast<int>(m) + 1;
  return CumulantTable(std::move(order_list), pyramid.scales(), std::move(blocks),
                       std::move(values), std::move(usable));
}

}  // namespace scalefit
