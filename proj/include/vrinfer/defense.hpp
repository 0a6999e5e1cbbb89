#pragma once

// Telemetry defense: bounded Laplace noise on pose positions.  Coordinates
// are perturbed with Laplace noise scaled to (hi-lo)/epsilon and resampled
// until they land back inside the declared play-space bounds, so defended
// traces stay physically plausible (no heads below the floor).  Orientations
// and timestamps pass through untouched -- the published attacks on those
// channels are rate-based and positional noise does not help against them.

#include <algorithm>

#include "vrinfer/io.hpp"
#include "vrinfer/rng.hpp"
#include "vrinfer/types.hpp"

namespace vrinfer {

struct AxisBounds {
  double lo = 0.0, hi = 0.0;
};

struct PositionBounds {
  AxisBounds x{-3.0, 3.0};
  AxisBounds y{0.0, 3.0};
  AxisBounds z{-3.0, 3.0};
};

inline void validate_bounds(const PositionBounds& b) {
  for (const AxisBounds* a : {&b.x, &b.y, &b.z})
    expect(std::isfinite(a->lo) && std::isfinite(a->hi) && a->hi > a->lo,
           Err::InvalidBounds, "axis bounds must be finite with hi > lo");
}

namespace detail {

// One bounded-Laplace draw: resample until inside, clamp after kMaxResample
// tries (astronomically rare for reasonable epsilon; the clamp keeps the
// routine total).
inline double bounded_laplace(double v, double scale, const AxisBounds& b, Rng& rng) {
  constexpr int kMaxResample = 1000;
  for (int i = 0; i < kMaxResample; ++i) {
    double out = v + rng.laplace(scale);
    if (out >= b.lo && out <= b.hi) return out;
  }
  return std::clamp(v, b.lo, b.hi);
}

}  // namespace detail

inline TelemetryTrace apply_bounded_laplace(const TelemetryTrace& trace, double epsilon,
                                            const PositionBounds& bounds,
                                            std::uint64_t seed) {
  expect(std::isfinite(epsilon) && epsilon > 0.0, Err::InvalidEpsilon,
         "epsilon must be finite and > 0");
  validate_bounds(bounds);
  Rng rng(seed);
  const double sx = (bounds.x.hi - bounds.x.lo) / epsilon;
  const double sy = (bounds.y.hi - bounds.y.lo) / epsilon;
  const double sz = (bounds.z.hi - bounds.z.lo) / epsilon;
  TelemetryTrace out = trace;
  for (TelemetryFrame& f : out.frames)
    for (Pose* p : {&f.hmd, &f.left, &f.right}) {
      p->position.x = detail::bounded_laplace(p->position.x, sx, bounds.x, rng);
      p->position.y = detail::bounded_laplace(p->position.y, sy, bounds.y, rng);
      p->position.z = detail::bounded_laplace(p->position.z, sz, bounds.z, rng);
    }
  return out;
}

inline json bounds_to_json(const PositionBounds& b) {
  return json{{"x", {b.x.lo, b.x.hi}}, {"y", {b.y.lo, b.y.hi}}, {"z", {b.z.lo, b.z.hi}}};
}

inline PositionBounds bounds_from_json(const json& j) {
  PositionBounds b;
  auto axis = [&](const char* name) {
    const json& a = j.at(name);
    expect(a.is_array() && a.size() == 2, Err::InvalidBounds,
           std::string("bounds.") + name + " must be [lo, hi]");
    return AxisBounds{a[0].get<double>(), a[1].get<double>()};
  };
  b.x = axis("x");
  b.y = axis("y");
  b.z = axis("z");
  validate_bounds(b);
  return b;
}

}  // namespace vrinfer
