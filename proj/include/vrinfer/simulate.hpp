#pragma once

// Synthetic session generator.  Renders a profile + script into the exact
// artifacts a deployed escape-room app would log: a 6DoF telemetry trace at
// the device tracking rate, an app event log, a device-API snapshot, and
// network RTT probes.  With a zero NoiseModel the output is analytically
// clean: every extractor downstream recovers its ground-truth attribute
// bit-for-bit, which is what the round-trip tests pin down.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "vrinfer/device.hpp"
#include "vrinfer/env.hpp"
#include "vrinfer/layout.hpp"
#include "vrinfer/puzzles.hpp"
#include "vrinfer/rng.hpp"
#include "vrinfer/scenario.hpp"
#include "vrinfer/types.hpp"

namespace vrinfer {

// --- body geometry ----------------------------------------------------------
// The wingspan decomposes as arm + shoulder + arm; controllers are gripped in
// the palm, kGripOffset short of the fingertips, so a T-pose shows
// wingspan - 2*grip of horizontal controller separation.

namespace simconst {
inline constexpr double kEyeToCrownM = 0.11;        // HMD sits this far below crown
inline constexpr double kGripToFingertipM = 0.05;   // controller center to fingertip
inline constexpr double kHipDropM = 0.55;           // resting controller height below HMD
inline constexpr double kHipHalfWidthM = 0.18;
inline constexpr double kHipForwardM = 0.10;        // resting controllers slightly forward
inline constexpr double kTposeShelfDropM = 0.15;    // arms-level height below HMD
inline constexpr double kWallInsetM = 0.25;         // how close users walk to walls
inline constexpr double kCornerDwellFrac = 0.08;    // explore time parked at each corner
inline constexpr double kPressReachM = 0.45;        // forward reach during a button press
inline constexpr double kPressWindowS = 0.4;        // reach ramp on each side of a press
inline constexpr double kLeanDepthM = 0.35;         // forward lean while reading up close
inline constexpr double kDominantHandShare = 0.97;  // presses made with the dominant hand
}  // namespace simconst

namespace detail {

// Squat depth ratio (fraction of body height) by fitness class.
inline double squat_base_ratio(Fitness f) {
  switch (f) {
    case Fitness::Low: return 0.15;
    case Fitness::Moderate: return 0.30;
    default: return 0.45;
  }
}

// Quaternion aiming the -Z view axis at `dir` (unit).
inline Quat look_along(const Vec3& dir) {
  const Vec3 fwd{0.0, 0.0, -1.0};
  double c = std::clamp(fwd.dot(dir), -1.0, 1.0);
  if (c > 1.0 - 1e-12) return Quat{};
  if (c < -1.0 + 1e-12) return Quat::from_axis_angle({0.0, 1.0, 0.0}, kPi);
  Vec3 axis = fwd.cross(dir).normalized();
  return Quat::from_axis_angle(axis, std::acos(c));
}

inline Quat yaw_quat(double yaw_rad) {
  return Quat::from_axis_angle({0.0, 1.0, 0.0}, yaw_rad);
}

// Explore-room waypoint schedule: perimeter walk with corner dwells long
// enough that the room-extent percentiles land on the true extremes.
struct ExplorePath {
  std::vector<Vec3> points;   // waypoint positions (y unused)
  std::vector<double> times;  // normalized arrival time of each waypoint
};

inline ExplorePath make_explore_path(double ext_x, double ext_z) {
  using simconst::kCornerDwellFrac;
  ExplorePath p;
  const Vec3 c0{0.0, 0.0, 0.0};
  const std::vector<Vec3> corners = {{ext_x, 0.0, ext_z},
                                     {ext_x, 0.0, -ext_z},
                                     {-ext_x, 0.0, -ext_z},
                                     {-ext_x, 0.0, ext_z}};
  const double walk = (1.0 - 4.0 * kCornerDwellFrac) / 5.0;
  double t = 0.0;
  p.points.push_back(c0);
  p.times.push_back(t);
  for (const Vec3& c : corners) {
    t += walk;
    p.points.push_back(c);
    p.times.push_back(t);
    t += kCornerDwellFrac;  // dwell: same point again, later time
    p.points.push_back(c);
    p.times.push_back(t);
  }
  p.points.push_back(c0);
  p.times.push_back(1.0);
  return p;
}

inline Vec3 explore_pos(const ExplorePath& p, double u) {
  u = std::clamp(u, 0.0, 1.0);
  for (std::size_t i = 1; i < p.times.size(); ++i) {
    if (u <= p.times[i]) {
      double span = p.times[i] - p.times[i - 1];
      double w = span <= 0.0 ? 1.0 : (u - p.times[i - 1]) / span;
      return p.points[i - 1] + (p.points[i] - p.points[i - 1]) * w;
    }
  }
  return p.points.back();
}

// Per-puzzle standing anchors: a few distinct spots near the room center so
// the trace looks inhabited without perturbing the extent percentiles.
inline Vec3 stand_anchor(int puzzle_id, double ext_x, double ext_z, double y) {
  static const double kSpots[][2] = {{0.0, 0.0},   {0.3, 0.2},   {-0.3, -0.2},
                                     {0.25, -0.3}, {-0.25, 0.3}, {0.15, 0.35},
                                     {-0.2, -0.35}, {0.35, 0.0}};
  const double* s = kSpots[static_cast<std::size_t>(puzzle_id) % 8];
  double fx = std::min(0.8, std::max(0.0, ext_x - 0.1));
  double fz = std::min(0.8, std::max(0.0, ext_z - 0.1));
  return {s[0] * fx, y, s[1] * fz};
}

}  // namespace detail

// --- cognitive-test speech --------------------------------------------------
// Renders the profile's per-section answer counts into literal utterances.
// Construction guarantees the scorer recovers exactly the sampled counts:
// set-scored sections get fillers disjoint from the key, the countdown chain
// switches from -7 to -8 steps after the k-th term, and positional sections
// replace the tail with wrong-but-well-formed items.

struct MocaUtterances {
  std::string naming;                // puzzle 16, ';'-joined
  std::vector<std::string> serial7;  // puzzle 17, one utterance per number
  std::string recall;                // puzzle 18, ';'-joined
  std::string abstraction;           // puzzle 19, ';'-joined
  std::string repetition;            // puzzle 20, ';'-joined sentences
  std::string orientation;           // puzzle 22, ';'-joined year/month/date/day
};

namespace detail {

inline std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += kSentenceSeparator;
    out += parts[i];
  }
  return out;
}

template <typename Key>  // any indexable range of strings / string literals
inline std::vector<std::string> first_k_else(const Key& key,
                                             const std::vector<std::string>& fillers,
                                             int k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < key.size(); ++i)
    out.push_back(i < static_cast<std::size_t>(k) ? std::string(key[i]) : fillers[i]);
  return out;
}

}  // namespace detail

inline MocaUtterances make_moca_utterances(const MocaAnswerCounts& counts,
                                           const std::vector<std::string>& recall_words) {
  const MocaKey& key = moca_key();
  expect(recall_words.size() == 5, Err::InvalidConfig, "recall needs 5 source words");
  MocaUtterances u;

  static const std::vector<std::string> kAnimalFillers = {"dog", "horse", "bear"};
  u.naming = detail::join(detail::first_k_else(key.animals, kAnimalFillers, counts.naming));

  int value = 100;
  for (int i = 0; i < 5; ++i) {
    value -= i < counts.serial7 ? 7 : 8;
    u.serial7.push_back(std::to_string(value));
  }

  static const std::vector<std::string> kRecallFillers = {"piano", "window", "river",
                                                          "garden", "stone"};
  u.recall = detail::join(detail::first_k_else(recall_words, kRecallFillers, counts.recall));

  static const std::vector<std::string> kAbstractionFillers = {"fruit", "numbers"};
  u.abstraction =
      detail::join(detail::first_k_else(key.abstractions, kAbstractionFillers, counts.abstraction));

  static const std::vector<std::string> kBrokenSentences = {
      "i only know that john is the one to help now",
      "the cat always hid under the couch when dogs were in the yard"};
  u.repetition =
      detail::join(detail::first_k_else(key.sentences, kBrokenSentences, counts.repetition));

  static const std::vector<std::string> kOrientationFillers = {"2021", "october", "16",
                                                               "monday"};
  u.orientation =
      detail::join(detail::first_k_else(key.orientation, kOrientationFillers, counts.orientation));
  return u;
}

// --- latency probes ----------------------------------------------------------

inline std::vector<LatencySample> simulate_latency(double lat_deg, double lon_deg,
                                                   const std::vector<ServerSite>& servers,
                                                   double jitter_sigma_s, double duration_s,
                                                   Rng& rng,
                                                   const PropagationModel& model = {},
                                                   int probes_per_server = 8) {
  validate_propagation(model);
  expect(!servers.empty(), Err::InsufficientServers, "no servers to probe");
  expect(probes_per_server >= 1, Err::InvalidConfig, "probes_per_server must be >= 1");
  std::vector<LatencySample> out;
  for (int i = 0; i < probes_per_server; ++i) {
    for (std::size_t s = 0; s < servers.size(); ++s) {
      double d = great_circle_m(lat_deg, lon_deg, servers[s].lat_deg, servers[s].lon_deg);
      double rtt = 2.0 * d / model.v_eff_mps + model.proc_offset_s +
                   rng.normal(0.0, jitter_sigma_s);
      LatencySample sample;
      sample.server_id = servers[s].server_id;
      sample.rtt_s = std::max(rtt, 0.0);
      sample.t = (i * servers.size() + s + 1.0) * duration_s /
                 (probes_per_server * servers.size() + 1.0);
      out.push_back(sample);
    }
  }
  return out;
}

// --- main entry ---------------------------------------------------------------

inline SessionBundle simulate_session(const UserProfile& profile, const ScenarioScript& script,
                                      const NoiseModel& noise, std::uint64_t seed,
                                      const std::vector<ServerSite>& servers = default_server_fleet(),
                                      const PanelLayout& layout = default_panel_layout()) {
  using namespace simconst;
  validate_profile(profile);
  validate_script(script);
  validate_noise(noise);
  validate_layout(layout);

  Rng rng(derive_seed(seed, noise.seed));
  SessionBundle bundle;
  bundle.session_id = profile.user_id;  // sessions are keyed by directory on disk
  bundle.attacker_tier = AttackerTier::PrivilegedII;  // full view; mask_for_tier() reduces

  // Session-level draws (order is part of the output contract; reordering
  // changes every downstream byte).
  const double eye_off = noise.eye_offset_mean_m + rng.normal(0.0, noise.eye_offset_sigma_m);
  const double grip_off = noise.grip_offset_mean_m + rng.normal(0.0, noise.grip_offset_sigma_m);
  const double squat_ratio =
      detail::squat_base_ratio(profile.fitness) + rng.normal(0.0, noise.squat_ratio_sigma);
  const double hmd_y = profile.height_m - eye_off;

  const double ext_x = profile.room_length_m / 2.0 - kWallInsetM;
  const double ext_z = profile.room_width_m / 2.0 - kWallInsetM;
  expect(ext_x > 0.0 && ext_z > 0.0, Err::InvalidProfile, "room too small to walk in");

  // Body spans.  The shoulder width is whatever the wingspan leaves after the
  // two arms (nominally 16% of the span), so fingertip-to-fingertip extent in
  // a T-pose equals the wingspan identically.
  const double half_shoulder =
      (profile.wingspan_m - profile.arm_left_m - profile.arm_right_m) / 2.0;
  const double reach_left = half_shoulder + profile.arm_left_m - grip_off;
  const double reach_right = half_shoulder + profile.arm_right_m - grip_off;

  // Gaze target: the panel for the user's first language, else a stable
  // arbitrary pick (monolingual users still stare somewhere).
  const Panel* gaze_target = nullptr;
  for (const std::string& lang : profile.languages) {
    for (const Panel& p : layout.panels)
      if (p.language == lang) { gaze_target = &p; break; }
    if (gaze_target) break;
  }
  if (!gaze_target) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : profile.user_id) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    gaze_target = &layout.panels[h % layout.panels.size()];
  }
  const double gaze_z = std::min(0.5, ext_z - 0.15);

  // Segment timeline and the first-entry time of each puzzle.
  std::vector<double> seg_start(script.segments.size());
  double t_cursor = 0.0;
  for (std::size_t i = 0; i < script.segments.size(); ++i) {
    seg_start[i] = t_cursor;
    t_cursor += script.segments[i].duration_s;
  }
  const double total = t_cursor;
  const detail::ExplorePath explore = detail::make_explore_path(ext_x, ext_z);

  // --- events -----------------------------------------------------------------
  // Built per segment (first segment of each puzzle carries its events), then
  // time-jittered and sorted.  Reaction-trial presses keep the stimulus that
  // caused them so the press lands exactly reaction_time after it.

  std::vector<EventRecord> events;
  std::vector<double> press_times;          // drives the button-press reach motion
  std::vector<int> press_seg;               // segment index of each press
  const std::vector<std::string> recall_words = {
      puzzle_passwords().at(2), puzzle_passwords().at(3), puzzle_passwords().at(4),
      profile.colorblind ? std::string(kIshiharaColorblindWord) : std::string(kIshiharaNormalWord),
      puzzle_passwords().at(6)};
  const MocaUtterances moca = make_moca_utterances(profile.moca_answers, recall_words);

  auto push_event = [&](double t, EventKind kind, int puzzle, json payload) {
    EventRecord e;
    e.t = t;
    e.kind = kind;
    e.puzzle_id = puzzle;
    e.payload = std::move(payload);
    events.push_back(std::move(e));
  };
  auto spoken = [&](double t, int puzzle, const std::string& text) {
    push_event(t, EventKind::SpokenPassword, puzzle, json{{"text", text}});
  };

  std::vector<bool> puzzle_seen(25, false);
  for (std::size_t i = 0; i < script.segments.size(); ++i) {
    const ScriptSegment& seg = script.segments[i];
    const double t0 = seg_start[i], dur = seg.duration_s;
    const bool first = !puzzle_seen[seg.puzzle_id];
    puzzle_seen[seg.puzzle_id] = true;
    if (first) push_event(t0, EventKind::PuzzleEnter, seg.puzzle_id, json());
    if (!first) continue;

    const int p = seg.puzzle_id;
    auto pw = puzzle_passwords().find(p);
    if (pw != puzzle_passwords().end()) {
      std::string text = pw->second;
      if (p == kIshiharaPuzzleId && profile.colorblind) text = kIshiharaColorblindWord;
      spoken(t0 + 0.8 * dur, p, text);
    }
    switch (p) {
      case 6:
        for (double frac : {0.3, 0.5, 0.7}) {
          press_times.push_back(t0 + frac * dur);
          press_seg.push_back(static_cast<int>(i));
          bool dom = rng.bernoulli(kDominantHandShare);
          Handedness hand = dom ? profile.handedness
                                : (profile.handedness == Handedness::Right ? Handedness::Left
                                                                           : Handedness::Right);
          push_event(press_times.back(), EventKind::ButtonPress, p,
                     json{{"hand", to_string(hand)}});
        }
        break;
      case kReactionPuzzleId:
        for (int k = 0; k < kReactionTrials; ++k) {
          double stim = t0 + (k + 0.5) * dur / (kReactionTrials + 1.0);
          push_event(stim, EventKind::StimulusShown, p, json());
          double press = stim + profile.reaction_time_s;
          press_times.push_back(press);
          press_seg.push_back(static_cast<int>(i));
          bool dom = rng.bernoulli(kDominantHandShare);
          Handedness hand = dom ? profile.handedness
                                : (profile.handedness == Handedness::Right ? Handedness::Left
                                                                           : Handedness::Right);
          push_event(press, EventKind::ButtonPress, p, json{{"hand", to_string(hand)}});
        }
        break;
      case kUfoPuzzleId: {
        int distinct = 0;
        for (double r : ufo_balloon_rates())
          if (r <= profile.device.hmd_refresh_hz) ++distinct;
        push_event(t0 + 0.8 * dur, EventKind::UfoAnswer, p,
                   json{{"distinct_count", distinct}});
        break;
      }
      case kReadNearPuzzleId:
        push_event(t0 + 0.7 * dur, EventKind::ReadAttempt, p,
                   json{{"range", "close"},
                        {"success", profile.hyperopia != VisionSeverity::Severe}});
        break;
      case kReadFarPuzzleId:
        push_event(t0 + 0.7 * dur, EventKind::ReadAttempt, p,
                   json{{"range", "far"},
                        {"success", profile.myopia != VisionSeverity::Severe}});
        break;
      case 16: spoken(t0 + 0.8 * dur, p, moca.naming); break;
      case 17:
        for (int k = 0; k < 5; ++k)
          spoken(t0 + (k + 1.0) * dur / 6.0, p, moca.serial7[k]);
        break;
      case 18: spoken(t0 + 0.8 * dur, p, moca.recall); break;
      case 19: spoken(t0 + 0.8 * dur, p, moca.abstraction); break;
      case 20: spoken(t0 + 0.8 * dur, p, moca.repetition); break;
      case 22: spoken(t0 + 0.8 * dur, p, moca.orientation); break;
      default: break;
    }
  }

  // --- telemetry frames --------------------------------------------------------

  const double rate = profile.device.tracking_rate_hz;
  const long n_frames = std::lround(total * rate) + 1;
  bundle.trace.nominal_rate_hz = rate;
  bundle.trace.frames.reserve(static_cast<std::size_t>(n_frames));

  std::size_t seg_idx = 0;
  for (long fi = 0; fi < n_frames; ++fi) {
    const double t = static_cast<double>(fi) / rate;
    while (seg_idx + 1 < script.segments.size() &&
           t >= seg_start[seg_idx] + script.segments[seg_idx].duration_s)
      ++seg_idx;
    const ScriptSegment& seg = script.segments[seg_idx];
    const double u = std::clamp((t - seg_start[seg_idx]) / seg.duration_s, 0.0, 1.0);

    Vec3 head = detail::stand_anchor(seg.puzzle_id, ext_x, ext_z, hmd_y);
    double yaw = 0.0;
    Quat ori;
    bool ori_set = false;
    // Controllers in body frame: +x right, -z forward, rotated by yaw below.
    Vec3 lhand{-kHipHalfWidthM, -kHipDropM, -kHipForwardM};
    Vec3 rhand{kHipHalfWidthM, -kHipDropM, -kHipForwardM};

    switch (seg.primitive) {
      case MotionPrimitive::Stand:
      case MotionPrimitive::Idle:
      case MotionPrimitive::ReadFar:
        break;
      case MotionPrimitive::Turn:
        yaw = 2.0 * kPi * u;
        break;
      case MotionPrimitive::ReadNear:
        head.z -= kLeanDepthM * std::min(1.0, u / 0.3);
        break;
      case MotionPrimitive::Squat: {
        double s = std::sin(3.0 * kPi * u);
        head.y -= squat_ratio * profile.height_m * s * s;
        break;
      }
      case MotionPrimitive::TPose: {
        double lift;  // 0 = hips, 1 = full T
        if (u < 0.25) lift = u / 0.25;
        else if (u <= 0.75) lift = 1.0;
        else lift = (1.0 - u) / 0.25;
        double y_arm = -kHipDropM + lift * (kHipDropM - kTposeShelfDropM);
        lhand = {-kHipHalfWidthM - lift * (reach_left - kHipHalfWidthM), y_arm,
                 -kHipForwardM * (1.0 - lift)};
        rhand = {kHipHalfWidthM + lift * (reach_right - kHipHalfWidthM), y_arm,
                 -kHipForwardM * (1.0 - lift)};
        break;
      }
      case MotionPrimitive::ButtonPress: {
        double env = 0.0;
        bool dominant_right = profile.handedness == Handedness::Right;
        for (std::size_t k = 0; k < press_times.size(); ++k) {
          if (press_seg[k] != static_cast<int>(seg_idx)) continue;
          env = std::max(env, 1.0 - std::fabs(t - press_times[k]) / kPressWindowS);
        }
        env = std::max(env, 0.0);
        Vec3& hand = dominant_right ? rhand : lhand;
        hand.y += env * (kHipDropM - 0.30);
        hand.z -= env * kPressReachM;
        break;
      }
      case MotionPrimitive::ExploreRoom: {
        Vec3 at = detail::explore_pos(explore, u);
        Vec3 next = detail::explore_pos(explore, std::min(1.0, u + 0.01));
        Vec3 d = next - at;
        if (std::hypot(d.x, d.z) > 1e-6) yaw = std::atan2(-d.x, -d.z);
        head.x = at.x;
        head.z = at.z;
        break;
      }
      case MotionPrimitive::GazePanel: {
        head = {0.0, hmd_y, gaze_z};
        const Panel* aim = gaze_target;
        if (u < 0.5) {  // scan pass over the whole signpost row
          std::size_t k = std::min(layout.panels.size() - 1,
                                   static_cast<std::size_t>(u / 0.5 * layout.panels.size()));
          aim = &layout.panels[k];
        }
        ori = detail::look_along((aim->center - head).normalized());
        ori_set = true;
        break;
      }
    }

    if (!ori_set) ori = detail::yaw_quat(yaw);
    Quat body = detail::yaw_quat(yaw);
    TelemetryFrame f;
    f.t = t;
    f.hmd.position = head;
    f.hmd.orientation = ori;
    f.left.position = head + body.rotate(lhand);
    f.left.orientation = ori;
    f.right.position = head + body.rotate(rhand);
    f.right.orientation = ori;
    bundle.trace.frames.push_back(f);
  }

  // --- noise passes -------------------------------------------------------------

  if (noise.pos_sigma_m > 0.0 || noise.ori_sigma_rad > 0.0) {
    for (TelemetryFrame& f : bundle.trace.frames) {
      for (Pose* p : {&f.hmd, &f.left, &f.right}) {
        p->position.x += rng.normal(0.0, noise.pos_sigma_m);
        p->position.y += rng.normal(0.0, noise.pos_sigma_m);
        p->position.z += rng.normal(0.0, noise.pos_sigma_m);
        if (noise.ori_sigma_rad > 0.0) {
          Vec3 axis{rng.normal(0.0, 1.0), rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)};
          if (axis.norm() < 1e-9) axis = {0.0, 1.0, 0.0};
          Quat wobble = Quat::from_axis_angle(axis.normalized(),
                                              rng.normal(0.0, noise.ori_sigma_rad));
          p->orientation = (wobble * p->orientation).normalized();
        }
      }
    }
  }
  if (noise.time_jitter_sigma_s > 0.0) {
    double prev = -1e-6;  // keeps frame 0 at t >= 0
    for (TelemetryFrame& f : bundle.trace.frames) {
      f.t = std::max(f.t + rng.normal(0.0, noise.time_jitter_sigma_s), prev + 1e-6);
      prev = f.t;
    }
    for (EventRecord& e : events)
      e.t = std::max(e.t + rng.normal(0.0, noise.time_jitter_sigma_s), 0.0);
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const EventRecord& a, const EventRecord& b) { return a.t < b.t; });
  bundle.events = std::move(events);

  // --- device API + network --------------------------------------------------------

  DeviceApiSample api;
  api.ipd_m = std::clamp(profile.ipd_m + rng.normal(0.0, noise.ipd_sigma_m), 0.050, 0.080);
  api.reported_resolution_mp = profile.device.resolution_mp;
  api.reported_fov_deg = profile.device.fov_deg;
  api.host_cpu_ghz = profile.host_cpu_ghz;
  api.host_gpu_mhs = profile.host_gpu_mhs;
  const long n_render = std::lround(20.0 * profile.device.hmd_refresh_hz) + 1;
  double prev_ts = -1.0;
  for (long i = 0; i < n_render; ++i) {
    double ts = static_cast<double>(i) / profile.device.hmd_refresh_hz;
    if (noise.time_jitter_sigma_s > 0.0)
      ts = std::max(ts + rng.normal(0.0, noise.time_jitter_sigma_s), prev_ts + 1e-6);
    api.render_timestamps.push_back(ts);
    prev_ts = ts;
  }
  validate_device_api(api);
  bundle.device_api = api;

  bundle.latency = simulate_latency(profile.lat_deg, profile.lon_deg, servers,
                                    noise.rtt_jitter_sigma_s, total, rng);
  validate_bundle(bundle);
  return bundle;
}

// --- tier masking ---------------------------------------------------------------

// Resamples a trace onto a uniform `hz` grid: each output frame is the most
// recent real frame at that instant, re-stamped on the grid.  Idempotent.
inline TelemetryTrace downsample_trace(const TelemetryTrace& trace, double hz) {
  expect(hz > 0.0, Err::InvalidConfig, "downsample rate must be positive");
  expect(!trace.frames.empty(), Err::TooFewFrames, "cannot downsample an empty trace");
  TelemetryTrace out;
  out.nominal_rate_hz = hz;
  const double t_end = trace.frames.back().t;
  std::size_t src = 0;
  const long n = static_cast<long>(std::floor(t_end * hz + 1e-9));
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / hz;
    while (src + 1 < trace.frames.size() && trace.frames[src + 1].t <= t) ++src;
    if (trace.frames[src].t > t) continue;  // before the first real frame
    TelemetryFrame f = trace.frames[src];
    f.t = t;
    out.frames.push_back(f);
  }
  return out;
}

// Reduces a full-capture bundle to what a given attacker tier can observe:
// app-store tiers lose native-rate telemetry (30 Hz cap), the device API is
// privileged-runtime only, and network probes require network visibility.
inline SessionBundle mask_for_tier(const SessionBundle& full, AttackerTier tier) {
  SessionBundle out = full;
  out.attacker_tier = tier;
  if (!tier_has_native_rate_telemetry(tier) && full.trace.nominal_rate_hz > 30.0)
    out.trace = downsample_trace(full.trace, 30.0);
  if (!tier_has_device_api(tier)) out.device_api.reset();
  if (!tier_has_network(tier)) out.latency.clear();
  validate_bundle(out);
  return out;
}

}  // namespace vrinfer
