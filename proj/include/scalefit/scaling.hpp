#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scalefit/aggregate.hpp"
#include "scalefit/cumulant.hpp"

namespace scalefit {

/// Inclusive range of octaves j = log2(n).
struct OctaveWindow {
  int lo = 0;
  int hi = 0;

  bool contains(double octave) const noexcept { return octave >= lo && octave <= hi; }
  bool operator==(const OctaveWindow&) const = default;
};

/// Least-squares line y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double sse = 0.0;  // weighted when weights were supplied
  std::size_t points = 0;
};

/// (Weighted) least squares on centered data. With all-equal y the fit is
/// exact and r_squared is 1. Requires >= 2 points with distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> weights = {});

struct FitOptions {
  bool weight_by_blocks = false;  // weight each scale by its block count
};

/// log2|cum_m X^(n)| = m H(m) log2 n + c(m) over one octave window.
struct ScalingFit {
  int order = 0;
  double slope = 0.0;      // m * H(m)
  double intercept = 0.0;  // c(m), base-2
  double r_squared = 0.0;
  OctaveWindow window;
  std::size_t points_used = 0;

  double hurst() const noexcept { return slope / order; }
};

/// OLS of log2|values(m, n)| against log2 n over the usable cells whose
/// octave lies in `window`. Throws InsufficientPoints below 3 usable cells.
ScalingFit fit_loglog(const CumulantTable& table, int order, OctaveWindow window,
                      const FitOptions& options = {});

/// Octave window spanning every scale of the table.
OctaveWindow full_window(const CumulantTable& table);

struct HurstCurve {
  struct Entry {
    int order = 0;
    double hurst = 0.0;
    double r_squared = 0.0;
  };
  std::vector<Entry> entries;
  OctaveWindow window;
  std::vector<std::pair<int, std::string>> omitted;  // order, reason
  std::vector<std::string> warnings;                 // estimates outside (0, 1)

  const Entry* find(int order) const noexcept;
};

/// H(m) for every order of the table that can be fitted in `window`.
/// Throws InsufficientPoints when no order can.
HurstCurve hurst_spectrum(const CumulantTable& table, OctaveWindow window,
                          const FitOptions& options = {});

/// Estimate-versus-scale curve: one H estimate per sliding window.
struct LocalityCurve {
  struct Point {
    double octave = 0.0;  // window center
    double hurst = 0.0;
  };
  std::vector<Point> points;
  int order = 2;
  int window_width = 4;
  std::vector<std::string> notes;  // windows skipped and why

  double spread() const noexcept;
  std::vector<double> octaves() const;
  std::vector<double> hurst_values() const;
};

inline constexpr int kDefaultWindowWidth = 4;
inline constexpr int kMinWindowWidth = 3;

/// Without an explicit range, locality curves only use scales that keep at
/// least this many blocks (or wavelet coefficients). Coarser cells make
/// width-4 slope fits too noisy to tell a knee from sampling error.
inline constexpr std::size_t kMinLocalityBlocks = 128;

/// Slides `window_width` consecutive table scales (restricted to `range`, or
/// to scales with >= kMinLocalityBlocks blocks when no range is given) and
/// fits order `order` on each. Windows with fewer than 3 usable
/// cells are skipped with a note. Throws InsufficientData when fewer than 2
/// points remain.
LocalityCurve locality_curve(const CumulantTable& table, int order,
                             int window_width = kDefaultWindowWidth,
                             std::optional<OctaveWindow> range = std::nullopt);

/// Best two-segment linear fit.
struct KneePoint {
  double octave = 0.0;  // where the two fitted lines meet
  double left_slope = 0.0;
  double right_slope = 0.0;
  double left_intercept = 0.0;
  double right_intercept = 0.0;
  double sse_single = 0.0;     // one line through every point
  double sse_two = 0.0;        // left + right segment
  double sse_reduction = 0.0;  // sse_single - sse_two, >= 0
  std::size_t split = 0;       // index of the first right-segment point

  /// sse_reduction / sse_single; 0 when the single line is already exact.
  double relative_reduction() const noexcept;
};

inline constexpr std::size_t kMinKneePoints = 6;
inline constexpr std::size_t kMinSegmentPoints = 3;

/// Exhaustive search over every split leaving >= 3 points per side. Ties go
/// to the earliest split. The reported octave is the intersection of the two
/// lines clamped to the gap between the segments (the gap midpoint when the
/// lines are parallel). Requires >= 6 points with ascending x.
KneePoint detect_knee(std::span<const double> x, std::span<const double> y);
KneePoint detect_knee(const LocalityCurve& curve);

struct KneeCriteria {
  double min_relative_reduction = 0.2;
  double flat_tolerance = 0.1;
};

/// A knee is significant when it removes at least min_relative_reduction of
/// the single-line SSE and the curve is not flat (spread > flat_tolerance).
/// The spread test keeps estimation noise on flat curves from being read as
/// a structural break.
bool knee_is_significant(const KneePoint& knee, const LocalityCurve& curve,
                         const KneeCriteria& criteria = {});

struct MonofractalReport {
  bool monofractal = false;
  double spread = 0.0;  // max H(m) - min H(m)
};

/// Constant H(m) across orders within `tolerance`. Requires >= 2 orders.
MonofractalReport classify_monofractal(const HurstCurve& curve, double tolerance);

/// Aggregated-variance estimator: slope beta of log2 Var(X^(n)/n) against
/// log2 n, H = 1 + beta/2.
struct VarianceTimeFit {
  double slope = 0.0;
  double hurst = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
  OctaveWindow window;
};

VarianceTimeFit aggregated_variance_hurst(const AggregatePyramid& pyramid, OctaveWindow window);

}  // namespace scalefit
