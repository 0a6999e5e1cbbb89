#pragma once

// Anthropometric extractors: body geometry recovered from raw 6DoF telemetry
// alone.  Each routine states the physical assumption it exploits; all of
// them are exact on noiseless traces.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "vrinfer/scenario.hpp"
#include "vrinfer/stats.hpp"
#include "vrinfer/types.hpp"

namespace vrinfer {

// Offsets from headset geometry to body landmarks (meters).
inline constexpr double kHmdToCrownM = 0.11;        // HMD center sits below the crown
inline constexpr double kFingertipCorrectionM = 0.10;  // grip-to-fingertip, both hands
inline constexpr double kTposeShelfM = 0.15;        // arms-level height below the HMD
inline constexpr double kTposeBandM = 0.25;         // tolerance around the shelf
inline constexpr double kArmSameBandM = 0.01;       // |dL-dR| below this reads as equal
inline constexpr double kSquatLowRatio = 0.25;      // squat depth/height below => low fitness
inline constexpr double kReactionTickS = 1.0 / 60.0;  // display-frame quantum
inline constexpr double kFastReactionS = 0.250;

namespace detail {

inline double horizontal_dist(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x - b.x, a.z - b.z);
}

// Both controllers held at arms-level height relative to the headset: the
// signature of a T-pose (and of nothing else in the protocol, where idle
// hands rest near the hips).
inline bool tpose_like(const TelemetryFrame& f) {
  double shelf = f.hmd.position.y - kTposeShelfM;
  return std::fabs(f.left.position.y - shelf) <= kTposeBandM &&
         std::fabs(f.right.position.y - shelf) <= kTposeBandM;
}

}  // namespace detail

// Stature from standing-still windows: the 95th-percentile HMD height plus
// the crown offset.  The percentile (not the max) rides out pose jitter.
inline double estimate_height(const TelemetryTrace& trace,
                              const std::vector<TimeWindow>& stand_windows) {
  std::vector<double> heights;
  for (const TelemetryFrame& f : trace.frames)
    for (const TimeWindow& w : stand_windows)
      if (w.contains(f.t)) {
        heights.push_back(f.hmd.position.y);
        break;
      }
  expect(!heights.empty(), Err::EmptyWindow, "no frames in any stand window");
  return percentile(heights, 95.0) + kHmdToCrownM;
}

// Wingspan from the widest T-pose: maximum horizontal controller separation
// over arms-level frames, plus the fingertip correction for both grips.
inline double estimate_wingspan(const TelemetryTrace& trace) {
  double best = -1.0;
  for (const TelemetryFrame& f : trace.frames)
    if (detail::tpose_like(f))
      best = std::max(best, detail::horizontal_dist(f.left.position, f.right.position));
  expect(best >= 0.0, Err::NoTposeDetected, "no arms-level frames in trace");
  return best + kFingertipCorrectionM;
}

struct ArmComparison {
  std::string longer;  // "left" | "right" | "same"
  double delta_m = 0.0;  // max left reach minus max right reach
};

// Arm asymmetry from per-hand maximum horizontal reach (controller to the
// HMD's ground projection) across T-pose frames.  Shoulder geometry is
// symmetric, so the reach difference equals the arm-length difference.
// Differences under kArmSameBandM are below telemetry resolution.
inline ArmComparison compare_arm_lengths(const TelemetryTrace& trace) {
  double left = -1.0, right = -1.0;
  for (const TelemetryFrame& f : trace.frames) {
    if (!detail::tpose_like(f)) continue;
    left = std::max(left, detail::horizontal_dist(f.left.position, f.hmd.position));
    right = std::max(right, detail::horizontal_dist(f.right.position, f.hmd.position));
  }
  expect(left >= 0.0, Err::NoTposeDetected, "no arms-level frames in trace");
  ArmComparison out;
  out.delta_m = left - right;
  out.longer = std::fabs(out.delta_m) < kArmSameBandM ? "same"
               : out.delta_m > 0.0                    ? "left"
                                                      : "right";
  return out;
}

// Handedness from interaction asymmetry: majority hand over ButtonPress
// events; an exact tie falls back to which controller traveled farther
// (the dominant hand does the reaching).
inline Handedness infer_handedness(const std::vector<EventRecord>& events,
                                   const TelemetryTrace& trace) {
  int left = 0, right = 0;
  for (const EventRecord& e : events) {
    if (e.kind != EventKind::ButtonPress) continue;
    (e.payload.at("hand").get<std::string>() == "left" ? left : right)++;
  }
  expect(left + right > 0, Err::NoButtonEvents, "no ButtonPress events");
  if (left != right) return left > right ? Handedness::Left : Handedness::Right;
  double lpath = 0.0, rpath = 0.0;
  for (std::size_t i = 1; i < trace.frames.size(); ++i) {
    lpath += (trace.frames[i].left.position - trace.frames[i - 1].left.position).norm();
    rpath += (trace.frames[i].right.position - trace.frames[i - 1].right.position).norm();
  }
  return lpath > rpath ? Handedness::Left : Handedness::Right;
}

// Reaction time: median stimulus-to-press delay, snapped to the display
// frame quantum (presses register on frame boundaries).
inline double estimate_reaction_time(const std::vector<EventRecord>& events,
                                     double max_delay_s = 2.0) {
  std::vector<double> delays;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].kind != EventKind::StimulusShown) continue;
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      if (events[j].kind != EventKind::ButtonPress) continue;
      double d = events[j].t - events[i].t;
      if (d >= 0.0 && d <= max_delay_s) delays.push_back(d);
      break;
    }
  }
  expect(!delays.empty(), Err::NoStimulusPairs, "no stimulus/press pairs");
  return round_to(median(delays), kReactionTickS);
}

inline bool is_fast_reaction(double reaction_s) { return reaction_s < kFastReactionS; }

// Squat depth as a fraction of stature: HMD vertical travel inside the squat
// windows over the estimated height.
inline double estimate_squat_ratio(const TelemetryTrace& trace,
                                   const std::vector<TimeWindow>& squat_windows,
                                   double height_m) {
  expect(height_m > 0.0, Err::InvalidConfig, "height must be positive");
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const TelemetryFrame& f : trace.frames)
    for (const TimeWindow& w : squat_windows)
      if (w.contains(f.t)) {
        double y = f.hmd.position.y;
        if (!any) { lo = hi = y; any = true; }
        lo = std::min(lo, y);
        hi = std::max(hi, y);
        break;
      }
  expect(any, Err::NoSquatSegment, "no frames in any squat window");
  return (hi - lo) / height_m;
}

inline bool is_low_fitness(double squat_ratio) { return squat_ratio < kSquatLowRatio; }

}  // namespace vrinfer
