#include "scalefit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "fft.hpp"
#include "scalefit/error.hpp"
#include "scalefit/kernels.hpp"
#include "scalefit/rng.hpp"
#include "scalefit/trace_io.hpp"

namespace scalefit {

namespace {

constexpr double kNegativeEigenTolerance = 1e-8;
constexpr std::size_t kMinFgnLength = 16;

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    fail(ErrorKind::Domain, "hurst must lie in (0, 1), got " + format_real(hurst));
  }
}

void check_variance(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    fail(ErrorKind::Domain, "variance must be finite and > 0, got " + format_real(variance));
  }
}

}  // namespace

void FgnSpec::validate() const {
  try {
    check_hurst(hurst);
    check_variance(variance);
  } catch (const Error& e) {
    fail(ErrorKind::InvalidSpec, e.what());
  }
  if (length < kMinFgnLength || !is_power_of_two(length)) {
    fail(ErrorKind::InvalidSpec,
         "fGn length must be a power of two >= 16, got " + std::to_string(length));
  }
}

bool CascadeSpec::degenerate() const noexcept {
  return equal_split || std::isinf(multiplier_param);
}

void CascadeSpec::validate() const {
  if (depth < 2 || depth > 30) {
    fail(ErrorKind::InvalidSpec, "cascade depth must be in 2..30, got " + std::to_string(depth));
  }
  if (!(multiplier_param > 0.0)) {
    fail(ErrorKind::InvalidSpec,
         "cascade multiplier parameter must be > 0, got " + format_real(multiplier_param));
  }
  if (!(total_mass > 0.0) || !std::isfinite(total_mass)) {
    fail(ErrorKind::InvalidSpec,
         "cascade total mass must be finite and > 0, got " + format_real(total_mass));
  }
}

double fgn_autocovariance(double hurst, double variance, std::size_t lag) {
  check_hurst(hurst);
  check_variance(variance);
  if (lag == 0) return variance;
  if (hurst == 0.5) return 0.0;
  // k^{2H} ((1 + 1/k)^{2H} - 2 + (1 - 1/k)^{2H}), written with expm1/log1p so
  // the second difference keeps its precision at large lags.
  const double k = static_cast<double>(lag);
  const double two_h = 2.0 * hurst;
  const double u = 1.0 / k;
  const double second_diff =
      std::expm1(two_h * std::log1p(u)) + std::expm1(two_h * std::log1p(-u));
  return 0.5 * variance * std::pow(k, two_h) * second_diff;
}

Trace generate_fgn(const FgnSpec& spec) {
  spec.validate();
  const std::size_t n = spec.length;
  const std::size_t m = 2 * n;

  // First row of the 2N circulant: gamma(0..N), gamma(N-1..1).
  std::vector<double> row(m);
  for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocovariance(spec.hurst, spec.variance, k);
  for (std::size_t k = 1; k < n; ++k) row[n + k] = row[n - k];

  std::vector<double> eigen = detail::real_even_spectrum(row);
  const double max_eigen = *std::max_element(eigen.begin(), eigen.end());
  for (std::size_t k = 0; k < eigen.size(); ++k) {
    if (eigen[k] < 0.0) {
      if (eigen[k] < -kNegativeEigenTolerance * max_eigen) {
        fail(ErrorKind::Synthesis, "circulant embedding eigenvalue " + std::to_string(k) +
                                       " is negative (" + format_real(eigen[k]) + ")");
      }
      eigen[k] = 0.0;
    }
  }

  // Hermitian Gaussian spectrum; draw order: k = 0, k = N, then (re, im)
  // for k = 1..N-1.
  Rng rng(spec.seed);
  const double md = static_cast<double>(m);
  std::vector<std::complex<double>> half(n + 1);
  half[0] = std::sqrt(eigen[0] / md) * rng.normal();
  half[n] = std::sqrt(eigen[n] / md) * rng.normal();
  for (std::size_t k = 1; k < n; ++k) {
    const double scale = std::sqrt(eigen[k] / (2.0 * md));
    const double re = rng.normal();
    const double im = rng.normal();
    half[k] = {scale * re, scale * im};
  }
  std::vector<double> full = detail::hermitian_synthesis(half, m);
  full.resize(n);

  Trace trace;
  trace.samples = std::move(full);
  trace.meta.model = "fgn";
  trace.meta.seed = spec.seed;
  trace.meta.params = {{"hurst", format_real(spec.hurst)},
                       {"length", std::to_string(spec.length)},
                       {"variance", format_real(spec.variance)}};
  trace.meta.created = creation_timestamp();
  return trace;
}

Trace generate_cascade(const CascadeSpec& spec) {
  spec.validate();
  const bool equal = spec.degenerate();
  Rng rng(spec.seed);
  std::vector<double> mass{spec.total_mass};
  std::vector<double> next;
  for (unsigned level = 0; level < spec.depth; ++level) {
    next.resize(2 * mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i) {
      const double w = equal ? 0.5 : rng.beta_symmetric(spec.multiplier_param);
      const double left = mass[i] * w;
      next[2 * i] = left;
      next[2 * i + 1] = mass[i] - left;
    }
    mass.swap(next);
  }

  Trace trace;
  trace.samples = std::move(mass);
  trace.meta.model = "cascade";
  trace.meta.seed = spec.seed;
  trace.meta.params = {{"depth", std::to_string(spec.depth)},
                       {"multiplier_param", format_real(spec.multiplier_param)},
                       {"total_mass", format_real(spec.total_mass)},
                       {"equal_split", equal ? "true" : "false"}};
  trace.meta.created = creation_timestamp();
  return trace;
}

Trace generate_multifractal(const FgnSpec& fgn, const CascadeSpec& cascade) {
  fgn.validate();
  cascade.validate();
  if (fgn.length != (std::size_t{1} << cascade.depth)) {
    fail(ErrorKind::LengthMismatch, "fGn length " + std::to_string(fgn.length) +
                                        " differs from 2^depth = " +
                                        std::to_string(std::size_t{1} << cascade.depth));
  }
  Trace noise = generate_fgn(fgn);
  const Trace measure = generate_cascade(cascade);
  const double n = static_cast<double>(fgn.length);
  for (std::size_t k = 0; k < noise.samples.size(); ++k) {
    const double mu = measure.samples[k] / cascade.total_mass;
    noise.samples[k] *= std::sqrt(n * mu);
  }

  noise.meta.model = "multifractal";
  for (const auto& [key, value] : measure.meta.params) {
    if (key != "depth") noise.meta.params["cascade_" + key] = value;
  }
  noise.meta.params["cascade_depth"] = std::to_string(cascade.depth);
  noise.meta.params["cascade_seed"] = std::to_string(cascade.seed);
  return noise;
}

Trace partial_sums(const Trace& trace) {
  if (trace.samples.empty()) fail(ErrorKind::InsufficientData, "partial_sums of an empty trace");
  Trace out;
  out.samples.resize(trace.samples.size());
  kernels::CompensatedSum acc;
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    acc.add(trace.samples[k]);
    out.samples[k] = acc.value();
  }
  out.meta = trace.meta;
  out.meta.params["cumulative"] = "true";
  return out;
}

std::vector<double> sample_autocovariance(std::span<const double> x, std::size_t max_lag,
                                          bool subtract_mean) {
  if (x.size() <= max_lag) {
    fail(ErrorKind::InsufficientData, "autocovariance lag " + std::to_string(max_lag) +
                                          " needs more than " + std::to_string(x.size()) +
                                          " samples");
  }
  std::vector<double> centered;
  std::span<const double> data = x;
  if (subtract_mean) {
    const double mean = kernels::parallel::sum(x) / static_cast<double>(x.size());
    centered.resize(x.size());
    std::transform(x.begin(), x.end(), centered.begin(), [mean](double v) { return v - mean; });
    data = centered;
  }
  std::vector<double> acov = kernels::parallel::lagged_products(data, max_lag);
  for (std::size_t k = 0; k <= max_lag; ++k) acov[k] /= static_cast<double>(x.size() - k);
  return acov;
}

}  // namespace scalefit
