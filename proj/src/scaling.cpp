#include "scalefit/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scalefit/error.hpp"
#include "scalefit/trace_io.hpp"

namespace scalefit {

namespace {

double octave_of(std::size_t scale) { return std::log2(static_cast<double>(scale)); }

ScalingFit fit_cells(const CumulantTable& table, int order, std::span<const std::size_t> indices,
                     OctaveWindow window, const FitOptions& options) {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> w;
  for (std::size_t s : indices) {
    const std::size_t scale = table.scales()[s];
    if (!table.usable(order, scale)) continue;
    x.push_back(octave_of(scale));
    y.push_back(std::log2(std::abs(table.value(order, scale))));
    w.push_back(static_cast<double>(table.block_counts()[s]));
  }
  if (x.size() < 3) {
    fail(ErrorKind::InsufficientPoints,
         "insufficient usable scales: order " + std::to_string(order) + " has " +
             std::to_string(x.size()) + " usable scales in octaves [" + std::to_string(window.lo) + ", " +
             std::to_string(window.hi) + "], need 3");
  }
  const LineFit line =
      fit_line(x, y, options.weight_by_blocks ? std::span<const double>(w) : std::span<const double>());
  ScalingFit fit;
  fit.order = order;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.window = window;
  fit.points_used = line.points;
  return fit;
}

}  // namespace

LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> weights) {
  const std::size_t n = x.size();
  if (y.size() != n || (!weights.empty() && weights.size() != n)) {
    fail(ErrorKind::LengthMismatch, "fit_line: x, y and weights must have equal lengths");
  }
  if (n < 2) fail(ErrorKind::InsufficientPoints, "fit_line needs at least 2 points");
  auto wt = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };

  double sw = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += wt(i);
    sx += wt(i) * x[i];
    sy += wt(i) * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += wt(i) * dx * dx;
    sxy += wt(i) * dx * dy;
    syy += wt(i) * dy * dy;
  }
  if (!(sxx > 0.0)) fail(ErrorKind::InsufficientPoints, "fit_line: x values are all equal");

  LineFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += wt(i) * r * r;
  }
  fit.sse = sse;
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return fit;
}

ScalingFit fit_loglog(const CumulantTable& table, int order, OctaveWindow window,
                      const FitOptions& options) {
  if (window.lo > window.hi) {
    fail(ErrorKind::Domain, "octave window [" + std::to_string(window.lo) + ", " +
                                std::to_string(window.hi) + "] is empty");
  }
  std::vector<std::size_t> indices;
  for (std::size_t s = 0; s < table.scales().size(); ++s) {
    if (window.contains(octave_of(table.scales()[s]))) indices.push_back(s);
  }
  return fit_cells(table, order, indices, window, options);
}

OctaveWindow full_window(const CumulantTable& table) {
  if (table.scales().empty()) fail(ErrorKind::InsufficientData, "cumulant table has no scales");
  return {static_cast<int>(std::floor(octave_of(table.scales().front()))),
          static_cast<int>(std::ceil(octave_of(table.scales().back())))};
}

const HurstCurve::Entry* HurstCurve::find(int order) const noexcept {
  for (const auto& e : entries) {
    if (e.order == order) return &e;
  }
  return nullptr;
}

HurstCurve hurst_spectrum(const CumulantTable& table, OctaveWindow window,
                          const FitOptions& options) {
  HurstCurve curve;
  curve.window = window;
  for (int order : table.orders()) {
    try {
      const ScalingFit fit = fit_loglog(table, order, window, options);
      const double h = fit.hurst();
      curve.entries.push_back({order, h, fit.r_squared});
      // H(1) is 1 by construction (the mean scales exactly with n).
      if (order > 1 && !(h > 0.0 && h < 1.0)) {
        curve.warnings.push_back("H(" + std::to_string(order) + ") = " + format_real(h) +
                                 " lies outside (0, 1)");
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientPoints) throw;
      curve.omitted.emplace_back(order, e.what());
    }
  }
  if (curve.entries.empty()) {
    fail(ErrorKind::InsufficientPoints, "no cumulant order has 3 usable scales in octaves [" +
                                            std::to_string(window.lo) + ", " +
                                            std::to_string(window.hi) + "]");
  }
  return curve;
}

double LocalityCurve::spread() const noexcept {
  if (points.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(
      points.begin(), points.end(), [](const Point& a, const Point& b) { return a.hurst < b.hurst; });
  return hi->hurst - lo->hurst;
}

std::vector<double> LocalityCurve::octaves() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.octave);
  return out;
}

std::vector<double> LocalityCurve::hurst_values() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.hurst);
  return out;
}

LocalityCurve locality_curve(const CumulantTable& table, int order, int window_width,
                             std::optional<OctaveWindow> range) {
  if (window_width < kMinWindowWidth) {
    fail(ErrorKind::Domain, "locality window width must be >= 3, got " +
                                std::to_string(window_width));
  }
  std::vector<std::size_t> selected;
  for (std::size_t s = 0; s < table.scales().size(); ++s) {
    const bool keep = range ? range->contains(octave_of(table.scales()[s]))
                            : table.block_counts()[s] >= kMinLocalityBlocks;
    if (keep) selected.push_back(s);
  }
  const auto width = static_cast<std::size_t>(window_width);
  if (selected.size() < width + 1) {
    fail(ErrorKind::InsufficientData, std::to_string(selected.size()) +
                                          " scales cannot hold two sliding windows of width " +
                                          std::to_string(window_width));
  }

  LocalityCurve curve;
  curve.order = order;
  curve.window_width = window_width;
  for (std::size_t start = 0; start + width <= selected.size(); ++start) {
    const std::span<const std::size_t> cells(selected.data() + start, width);
    double center = 0.0;
    for (std::size_t s : cells) center += octave_of(table.scales()[s]);
    center /= static_cast<double>(width);
    const OctaveWindow window{
        static_cast<int>(std::floor(octave_of(table.scales()[cells.front()]))),
        static_cast<int>(std::ceil(octave_of(table.scales()[cells.back()])))};
    try {
      const ScalingFit fit = fit_cells(table, order, cells, window, {});
      curve.points.push_back({center, fit.hurst()});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientPoints) throw;
      curve.notes.push_back("window centered at octave " + format_real(center) + ": " + e.what());
    }
  }
  if (curve.points.size() < 2) {
    fail(ErrorKind::InsufficientPoints, "order " + std::to_string(order) +
                                            " locality curve has fewer than 2 fittable windows");
  }
  return curve;
}

double KneePoint::relative_reduction() const noexcept {
  return sse_single > 0.0 ? sse_reduction / sse_single : 0.0;
}

KneePoint detect_knee(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n) fail(ErrorKind::LengthMismatch, "detect_knee: x and y lengths differ");
  if (n < kMinKneePoints) {
    fail(ErrorKind::InsufficientPoints,
         "knee detection needs at least 6 points, got " + std::to_string(n));
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) fail(ErrorKind::Domain, "detect_knee: x must be strictly ascending");
  }

  KneePoint best;
  best.sse_two = std::numeric_limits<double>::infinity();
  LineFit best_left;
  LineFit best_right;
  for (std::size_t split = kMinSegmentPoints; split + kMinSegmentPoints <= n; ++split) {
    const LineFit left = fit_line(x.first(split), y.first(split));
    const LineFit right = fit_line(x.subspan(split), y.subspan(split));
    const double sse = left.sse + right.sse;
    if (sse < best.sse_two) {
      best.sse_two = sse;
      best.split = split;
      best_left = left;
      best_right = right;
    }
  }

  best.left_slope = best_left.slope;
  best.right_slope = best_right.slope;
  best.left_intercept = best_left.intercept;
  best.right_intercept = best_right.intercept;
  const double gap_lo = x[best.split - 1];
  const double gap_hi = x[best.split];
  const double dslope = best.left_slope - best.right_slope;
  const double slope_scale = std::max({1.0, std::abs(best.left_slope), std::abs(best.right_slope)});
  if (std::abs(dslope) > 1e-12 * slope_scale) {
    const double meet = (best.right_intercept - best.left_intercept) / dslope;
    best.octave = std::clamp(meet, gap_lo, gap_hi);
  } else {
    best.octave = 0.5 * (gap_lo + gap_hi);
  }

  best.sse_single = fit_line(x, y).sse;
  // Rounding noise on an exactly linear input is not a reduction.
  double energy = 0.0;
  for (double v : y) energy += v * v;
  if (best.sse_single <= 1e-24 * std::max(1.0, energy)) best.sse_single = 0.0;
  best.sse_reduction = std::max(0.0, best.sse_single - best.sse_two);
  return best;
}

KneePoint detect_knee(const LocalityCurve& curve) {
  const std::vector<double> x = curve.octaves();
  const std::vector<double> y = curve.hurst_values();
  return detect_knee(x, y);
}

bool knee_is_significant(const KneePoint& knee, const LocalityCurve& curve,
                         const KneeCriteria& criteria) {
  return knee.relative_reduction() >= criteria.min_relative_reduction &&
         curve.spread() > criteria.flat_tolerance;
}

MonofractalReport classify_monofractal(const HurstCurve& curve, double tolerance) {
  if (!(tolerance > 0.0)) fail(ErrorKind::Domain, "monofractal tolerance must be > 0");
  if (curve.entries.size() < 2) {
    fail(ErrorKind::InsufficientPoints, "classification needs H(m) for at least 2 orders, got " +
                                            std::to_string(curve.entries.size()));
  }
  const auto [lo, hi] = std::minmax_element(
      curve.entries.begin(), curve.entries.end(),
      [](const HurstCurve::Entry& a, const HurstCurve::Entry& b) { return a.hurst < b.hurst; });
  MonofractalReport report;
  report.spread = hi->hurst - lo->hurst;
  report.monofractal = report.spread <= tolerance;
  return report;
}

VarianceTimeFit aggregated_variance_hurst(const AggregatePyramid& pyramid, OctaveWindow window) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t s = 0; s < pyramid.size(); ++s) {
    const std::size_t n = pyramid.scales()[s];
    if (!window.contains(octave_of(n))) continue;
    const std::vector<double> k = sample_cumulants(pyramid.level(s), 2);
    const double nd = static_cast<double>(n);
    const double var_of_mean = k[1] / (nd * nd);
    if (!(var_of_mean > 0.0)) continue;
    x.push_back(octave_of(n));
    y.push_back(std::log2(var_of_mean));
  }
  if (x.size() < 3) {
    fail(ErrorKind::InsufficientPoints, "aggregated variance has " + std::to_string(x.size()) +
                                            " usable scales in octaves [" +
                                            std::to_string(window.lo) + ", " +
                                            std::to_string(window.hi) + "], need 3");
  }
  const LineFit line = fit_line(x, y);
  VarianceTimeFit fit;
  fit.slope = line.slope;
  fit.hurst = 1.0 + 0.5 * line.slope;
  fit.r_squared = line.r_squared;
  fit.points_used = line.points;
  fit.window = window;
  return fit;
}

}  // namespace scalefit
