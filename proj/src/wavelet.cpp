#include "scalefit/wavelet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "scalefit/error.hpp"
#include "scalefit/kernels.hpp"
#include "scalefit/trace_io.hpp"

namespace scalefit {

namespace {

const double kRootHalf = std::sqrt(0.5);

struct FilterPair {
  std::span<const double> lo;
  std::span<const double> hi;
};

FilterPair filters(WaveletFamily family) {
  static const std::array<double, 2> haar_lo{kRootHalf, kRootHalf};
  static const std::array<double, 2> haar_hi{kRootHalf, -kRootHalf};
  static constexpr std::array<double, 4> d4_hi{kDaubechies4[3], -kDaubechies4[2], kDaubechies4[1],
                                               -kDaubechies4[0]};
  if (family == WaveletFamily::Haar) return {haar_lo, haar_hi};
  return {kDaubechies4, d4_hi};
}

}  // namespace

std::string_view to_string(WaveletFamily family) noexcept {
  return family == WaveletFamily::Haar ? "haar" : "d4";
}

std::optional<WaveletFamily> parse_wavelet_family(std::string_view name) noexcept {
  if (name == "haar" || name == "Haar") return WaveletFamily::Haar;
  if (name == "d4" || name == "D4" || name == "daubechies4" || name == "Daubechies4") {
    return WaveletFamily::Daubechies4;
  }
  return std::nullopt;
}

int max_wavelet_levels(std::size_t length) noexcept {
  if (length < 16) return 0;
  return static_cast<int>(floor_log2(length)) - 3;
}

void analysis_step(std::span<const double> x, WaveletFamily family, std::vector<double>& approx,
                   std::vector<double>& detail) {
  const FilterPair f = filters(family);
  if (x.size() < f.lo.size() || x.size() % 2 != 0) {
    fail(ErrorKind::Domain, "wavelet step needs an even length >= " + std::to_string(f.lo.size()) +
                                ", got " + std::to_string(x.size()));
  }
  approx.assign(x.size() / 2, 0.0);
  detail.assign(x.size() / 2, 0.0);
  kernels::parallel::filter_step(x, f.lo, f.hi, approx, detail);
}

DwtResult dwt(std::span<const double> x, const WaveletSpec& spec) {
  if (spec.levels < 1) {
    fail(ErrorKind::InvalidSpec, "wavelet levels must be >= 1, got " + std::to_string(spec.levels));
  }
  if (!is_power_of_two(x.size())) {
    fail(ErrorKind::Domain, "wavelet input length must be a power of two, got " +
                                std::to_string(x.size()));
  }
  if (spec.levels > max_wavelet_levels(x.size())) {
    fail(ErrorKind::InvalidSpec, std::to_string(spec.levels) + " wavelet levels need at least " +
                                     std::to_string(std::size_t{1} << (spec.levels + 3)) +
                                     " samples, got " + std::to_string(x.size()));
  }
  DwtResult out;
  out.details.resize(static_cast<std::size_t>(spec.levels));
  std::vector<double> current(x.begin(), x.end());
  std::vector<double> approx;
  for (int j = 0; j < spec.levels; ++j) {
    analysis_step(current, spec.family, approx, out.details[static_cast<std::size_t>(j)]);
    current.swap(approx);
  }
  out.approximation = std::move(current);
  return out;
}

std::size_t LogscaleDiagram::index_of(int octave) const {
  const auto it = std::find(octaves.begin(), octaves.end(), octave);
  if (it == octaves.end()) {
    fail(ErrorKind::Domain, "octave " + std::to_string(octave) + " is not in the diagram");
  }
  return static_cast<std::size_t>(it - octaves.begin());
}

LogscaleDiagram logscale_diagram(std::span<const double> x, const WaveletSpec& spec) {
  const DwtResult result = dwt(x, spec);
  // Detail energy at roundoff level relative to the signal power is zero
  // (a constant input leaves ~1e-32 with D4).
  kernels::CompensatedSum power;
  for (double v : x) power.add(v * v);
  const double floor = 1e-26 * power.value() / static_cast<double>(x.size());
  LogscaleDiagram diagram;
  diagram.family = spec.family;
  for (std::size_t j = 0; j < result.details.size(); ++j) {
    const auto& d = result.details[j];
    kernels::CompensatedSum energy;
    for (double v : d) energy.add(v * v);
    const double mu = energy.value() / static_cast<double>(d.size());
    diagram.octaves.push_back(static_cast<int>(j) + 1);
    diagram.energy.push_back(mu <= floor ? 0.0 : mu);
    diagram.counts.push_back(d.size());
  }
  return diagram;
}

WaveletHurstFit wavelet_hurst(const LogscaleDiagram& diagram, int j1, int j2) {
  if (j1 >= j2) {
    fail(ErrorKind::Domain,
         "wavelet fit range needs j1 < j2, got [" + std::to_string(j1) + ", " + std::to_string(j2) + "]");
  }
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> w;
  for (std::size_t i = 0; i < diagram.octaves.size(); ++i) {
    const int j = diagram.octaves[i];
    if (j < j1 || j > j2) continue;
    if (!(diagram.energy[i] > 0.0)) {
      fail(ErrorKind::ZeroEnergy, "octave " + std::to_string(j) +
                                      " has zero detail energy (constant input?)");
    }
    x.push_back(j);
    y.push_back(std::log2(diagram.energy[i]));
    w.push_back(static_cast<double>(diagram.counts[i]));
  }
  if (x.size() < 3) {
    fail(ErrorKind::Domain, "wavelet fit range [" + std::to_string(j1) + ", " + std::to_string(j2) +
                                "] holds " + std::to_string(x.size()) + " octaves, need 3");
  }
  const LineFit line = fit_line(x, y, w);
  WaveletHurstFit fit;
  fit.alpha = line.slope;
  fit.hurst = 0.5 * (line.slope + 1.0);
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.j1 = j1;
  fit.j2 = j2;
  return fit;
}

std::pair<int, int> default_fit_range(const LogscaleDiagram& diagram) noexcept {
  if (diagram.octaves.empty()) return {3, 2};
  const int first = diagram.octaves.front();
  const int last = diagram.octaves.back();
  int j1 = std::max(3, first);
  int j2 = last - 1;
  if (j2 - j1 < 2) {
    j2 = last;
    j1 = std::max(first, j2 - 2);
  }
  return {j1, j2};
}

LocalityCurve wavelet_locality_curve(const LogscaleDiagram& diagram, int window_width,
                                     std::optional<OctaveWindow> range) {
  if (window_width < kMinWindowWidth) {
    fail(ErrorKind::Domain, "locality window width must be >= 3, got " +
                                std::to_string(window_width));
  }
  std::vector<int> selected;
  for (std::size_t i = 0; i < diagram.octaves.size(); ++i) {
    const int j = diagram.octaves[i];
    if (range ? range->contains(j) : diagram.counts[i] >= kMinLocalityBlocks) selected.push_back(j);
  }
  const auto width = static_cast<std::size_t>(window_width);
  if (selected.size() < width + 1) {
    fail(ErrorKind::InsufficientData, std::to_string(selected.size()) +
                                          " octaves cannot hold two sliding windows of width " +
                                          std::to_string(window_width));
  }
  LocalityCurve curve;
  curve.order = 2;
  curve.window_width = window_width;
  for (std::size_t start = 0; start + width <= selected.size(); ++start) {
    const int j1 = selected[start];
    const int j2 = selected[start + width - 1];
    const WaveletHurstFit fit = wavelet_hurst(diagram, j1, j2);
    curve.points.push_back({0.5 * (j1 + j2), fit.hurst});
  }
  return curve;
}

}  // namespace scalefit
