#include "scalefit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scalefit/error.hpp"

namespace scalefit {

double Rng::uniform() {
  // Top 53 bits, shifted by half a step so 0 and 1 are never returned.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    fail(ErrorKind::Domain, "gamma shape must be finite and > 0");
  }
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = 0.0;
    double v = 0.0;
    do {
      z = normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta_symmetric(double a) {
  // Doubles resolve (0, 2^-53) but not (1 - 2^-53, 1), so the draw is made
  // on the smaller side and truncated symmetrically to keep E[W] = 1/2.
  constexpr double kEdge = 0x1.0p-53;
  for (;;) {
    const double g1 = gamma(a);
    const double g2 = gamma(a);
    const double r = std::min(g1, g2) / (g1 + g2);
    if (!(r >= kEdge)) continue;
    return g1 <= g2 ? r : 1.0 - r;
  }
}

}  // namespace scalefit
