#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scalefit/scaling.hpp"
#include "scalefit/trace.hpp"

namespace scalefit {

enum class WaveletFamily { Haar, Daubechies4 };

std::string_view to_string(WaveletFamily family) noexcept;
std::optional<WaveletFamily> parse_wavelet_family(std::string_view name) noexcept;

/// Daubechies-4 scaling filter (1 + sqrt3, 3 + sqrt3, 3 - sqrt3, 1 - sqrt3) / (4 sqrt2).
inline constexpr std::array<double, 4> kDaubechies4 = {
    0.48296291314453416, 0.8365163037378079, 0.2241438680420134, -0.12940952255126037};

struct WaveletSpec {
  WaveletFamily family = WaveletFamily::Daubechies4;
  int levels = 1;
};

/// Largest admissible level count: log2(length) - 3, which leaves at least
/// 8 detail coefficients at the coarsest octave.
int max_wavelet_levels(std::size_t length) noexcept;

/// One periodic orthonormal analysis step. For Haar,
/// d = (x1 - x2)/sqrt(2), a = (x1 + x2)/sqrt(2). Needs an even length of at
/// least 2 (Haar) or 4 (Daubechies4).
void analysis_step(std::span<const double> x, WaveletFamily family, std::vector<double>& approx,
                   std::vector<double>& detail);

struct DwtResult {
  std::vector<std::vector<double>> details;  // details[j - 1] is octave j
  std::vector<double> approximation;
};

/// Periodic pyramid DWT. The length must be a power of two with at least
/// 2^(levels + 3) samples.
DwtResult dwt(std::span<const double> x, const WaveletSpec& spec);

/// Per-octave mean detail energy mu_j and coefficient count n_j.
struct LogscaleDiagram {
  std::vector<int> octaves;  // 1 .. levels
  std::vector<double> energy;
  std::vector<std::size_t> counts;
  WaveletFamily family = WaveletFamily::Daubechies4;

  std::size_t index_of(int octave) const;
};

LogscaleDiagram logscale_diagram(std::span<const double> x, const WaveletSpec& spec);
inline LogscaleDiagram logscale_diagram(const Trace& trace, const WaveletSpec& spec) {
  return logscale_diagram(trace.view(), spec);
}

struct WaveletHurstFit {
  double hurst = 0.0;
  double alpha = 0.0;  // slope of log2 mu_j against j
  double intercept = 0.0;
  double r_squared = 0.0;
  int j1 = 0;
  int j2 = 0;
};

/// Weighted least squares of log2 mu_j on j over [j1, j2] with weights n_j;
/// H = (alpha + 1) / 2. Needs >= 3 octaves and positive energies.
WaveletHurstFit wavelet_hurst(const LogscaleDiagram& diagram, int j1, int j2);

/// Default fit range: j1 = 3, j2 = levels - 1 (clamped to keep 3 octaves).
std::pair<int, int> default_fit_range(const LogscaleDiagram& diagram) noexcept;

/// Sliding-window wavelet_hurst over consecutive octaves, restricted to
/// `range` when given and otherwise to octaves holding at least
/// kMinLocalityBlocks coefficients.
LocalityCurve wavelet_locality_curve(const LogscaleDiagram& diagram,
                                     int window_width = kDefaultWindowWidth,
                                     std::optional<OctaveWindow> range = std::nullopt);

}  // namespace scalefit
