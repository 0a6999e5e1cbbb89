#pragma once

// Core data model shared by the simulator, the attack modules, and the
// harness: poses, traces, event logs, device/latency samples, session
// bundles, ground-truth profiles, and attribute reports.
//
// All types are plain values, immutable by convention once constructed, and
// safe to share across threads.  Validation lives in free functions so that
// parsers and constructors can share it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace vrinfer {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class Err {
  // trace / event parsing
  MalformedRow,
  NonMonotonicTime,
  UnnormalizedQuaternion,
  MalformedLine,
  UnknownKind,
  PuzzleIdOutOfRange,
  MalformedJson,
  InvalidBundle,
  // simulator
  EmptyScript,
  InvalidProfile,
  // anthropometrics
  EmptyWindow,
  NoTposeDetected,
  NoButtonEvents,
  CapabilityDenied,
  NoSquatSegment,
  NoStimulusPairs,
  NegativeLatency,
  // environment
  InsufficientServers,
  // device fingerprinting
  TooFewFrames,
  MissingUfoAnswer,
  EmptyTable,
  // behavior
  MissingPuzzleEvents,
  UnrecognizedPassword,
  NoGazeHit,
  MissingReadAttempt,
  // inference
  DegenerateLabels,
  TooFewExamples,
  FeatureVersionMismatch,
  EmptyIndex,
  IncompleteProbe,
  // defense
  InvalidEpsilon,
  InvalidBounds,
  // harness
  IoFailure,
  InvalidConfig,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::MalformedRow: return "MalformedRow";
    case Err::NonMonotonicTime: return "NonMonotonicTime";
    case Err::UnnormalizedQuaternion: return "UnnormalizedQuaternion";
    case Err::MalformedLine: return "MalformedLine";
    case Err::UnknownKind: return "UnknownKind";
    case Err::PuzzleIdOutOfRange: return "PuzzleIdOutOfRange";
    case Err::MalformedJson: return "MalformedJson";
    case Err::InvalidBundle: return "InvalidBundle";
    case Err::EmptyScript: return "EmptyScript";
    case Err::InvalidProfile: return "InvalidProfile";
    case Err::EmptyWindow: return "EmptyWindow";
    case Err::NoTposeDetected: return "NoTposeDetected";
    case Err::NoButtonEvents: return "NoButtonEvents";
    case Err::CapabilityDenied: return "CapabilityDenied";
    case Err::NoSquatSegment: return "NoSquatSegment";
    case Err::NoStimulusPairs: return "NoStimulusPairs";
    case Err::NegativeLatency: return "NegativeLatency";
    case Err::InsufficientServers: return "InsufficientServers";
    case Err::TooFewFrames: return "TooFewFrames";
    case Err::MissingUfoAnswer: return "MissingUfoAnswer";
    case Err::EmptyTable: return "EmptyTable";
    case Err::MissingPuzzleEvents: return "MissingPuzzleEvents";
    case Err::UnrecognizedPassword: return "UnrecognizedPassword";
    case Err::NoGazeHit: return "NoGazeHit";
    case Err::MissingReadAttempt: return "MissingReadAttempt";
    case Err::DegenerateLabels: return "DegenerateLabels";
    case Err::TooFewExamples: return "TooFewExamples";
    case Err::FeatureVersionMismatch: return "FeatureVersionMismatch";
    case Err::EmptyIndex: return "EmptyIndex";
    case Err::IncompleteProbe: return "IncompleteProbe";
    case Err::InvalidEpsilon: return "InvalidEpsilon";
    case Err::InvalidBounds: return "InvalidBounds";
    case Err::IoFailure: return "IoFailure";
    case Err::InvalidConfig: return "InvalidConfig";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

inline void expect(bool cond, Err code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

// ---------------------------------------------------------------------------
// Small geometry types (right-handed frame, +Y up)
// ---------------------------------------------------------------------------

inline constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
  }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

// Unit quaternion stored in (w, x, y, z) order; see FORMATS.md for the
// serialization contract.
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  Quat normalized() const {
    double n = norm();
    return n > 0.0 ? Quat{w / n, x / n, y / n, z / n} : Quat{};
  }
  Quat operator*(const Quat& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }
  // Rotate a vector by this quaternion (assumed unit).
  Vec3 rotate(const Vec3& v) const {
    Vec3 u{x, y, z};
    Vec3 t = u.cross(v) * 2.0;
    return v + t * w + u.cross(t);
  }
  static Quat from_axis_angle(const Vec3& axis, double angle_rad) {
    Vec3 a = axis.normalized();
    double h = 0.5 * angle_rad, s = std::sin(h);
    return {std::cos(h), a.x * s, a.y * s, a.z * s};
  }
  static Quat yaw(double angle_rad) { return from_axis_angle({0, 1, 0}, angle_rad); }
  bool operator==(const Quat& o) const {
    return w == o.w && x == o.x && y == o.y && z == o.z;
  }
};

struct Pose {
  Vec3 position;
  Quat orientation;  // unit quaternion, (w,x,y,z)

  bool operator==(const Pose& o) const {
    return position == o.position && orientation == o.orientation;
  }
};

inline bool finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}
inline bool finite(const Quat& q) {
  return std::isfinite(q.w) && std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z);
}

// ---------------------------------------------------------------------------
// Telemetry
// ---------------------------------------------------------------------------

struct TelemetryFrame {
  double t = 0.0;  // seconds since session start
  Pose hmd, left, right;
};

struct TelemetryTrace {
  std::vector<TelemetryFrame> frames;         // strictly increasing t
  std::optional<double> nominal_rate_hz;      // declared, not measured
};

// Validates trace invariants.  `quat_tol` is the allowed deviation of
// quaternion norms from 1: programmatic construction uses the tight 1e-6
// bound, the CSV parser the looser 1e-3 one (real captures wobble).
inline void validate_trace(const TelemetryTrace& trace, double quat_tol = 1e-6) {
  double prev_t = -1.0;
  for (size_t i = 0; i < trace.frames.size(); ++i) {
    const TelemetryFrame& f = trace.frames[i];
    expect(std::isfinite(f.t) && f.t >= 0.0, Err::MalformedRow,
           "frame " + std::to_string(i) + ": non-finite or negative t");
    expect(f.t > prev_t || i == 0, Err::NonMonotonicTime,
           "frame " + std::to_string(i) + ": t=" + std::to_string(f.t) +
               " does not increase");
    prev_t = f.t;
    for (const Pose* p : {&f.hmd, &f.left, &f.right}) {
      expect(finite(p->position) && finite(p->orientation), Err::MalformedRow,
             "frame " + std::to_string(i) + ": non-finite pose");
      expect(std::abs(p->orientation.norm() - 1.0) <= quat_tol,
             Err::UnnormalizedQuaternion,
             "frame " + std::to_string(i) + ": quaternion norm " +
                 std::to_string(p->orientation.norm()));
    }
  }
}

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

enum class EventKind {
  PuzzleEnter,
  StimulusShown,
  ButtonPress,
  SpokenPassword,
  UfoAnswer,
  ReadAttempt,
};

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::PuzzleEnter: return "PuzzleEnter";
    case EventKind::StimulusShown: return "StimulusShown";
    case EventKind::ButtonPress: return "ButtonPress";
    case EventKind::SpokenPassword: return "SpokenPassword";
    case EventKind::UfoAnswer: return "UfoAnswer";
    case EventKind::ReadAttempt: return "ReadAttempt";
  }
  return "?";
}

inline EventKind event_kind_from_string(const std::string& s) {
  if (s == "PuzzleEnter") return EventKind::PuzzleEnter;
  if (s == "StimulusShown") return EventKind::StimulusShown;
  if (s == "ButtonPress") return EventKind::ButtonPress;
  if (s == "SpokenPassword") return EventKind::SpokenPassword;
  if (s == "UfoAnswer") return EventKind::UfoAnswer;
  if (s == "ReadAttempt") return EventKind::ReadAttempt;
  fail(Err::UnknownKind, "event kind '" + s + "'");
}

struct EventRecord {
  double t = 0.0;
  EventKind kind = EventKind::PuzzleEnter;
  int puzzle_id = 1;  // 1..24
  json payload;       // kind-specific: hand / text / distinct_count / success+range
};

inline void validate_event(const EventRecord& e, const std::string& where = "") {
  expect(std::isfinite(e.t) && e.t >= 0.0, Err::MalformedLine, where + "non-finite or negative t");
  expect(e.puzzle_id >= 1 && e.puzzle_id <= 24, Err::PuzzleIdOutOfRange,
         where + "puzzle_id " + std::to_string(e.puzzle_id) + " outside [1,24]");
  if (e.kind == EventKind::ButtonPress) {
    expect(e.payload.contains("hand"), Err::MalformedLine, where + "ButtonPress without hand");
    std::string hand = e.payload.at("hand").get<std::string>();
    expect(hand == "left" || hand == "right", Err::MalformedLine,
           where + "ButtonPress hand '" + hand + "'");
  }
}

// ---------------------------------------------------------------------------
// Device API / latency
// ---------------------------------------------------------------------------

struct DeviceApiSample {
  double ipd_m = 0.063;
  std::vector<double> render_timestamps;  // display frame callbacks, seconds
  double reported_resolution_mp = 0.0;
  double reported_fov_deg = 0.0;
  // Host benchmark scalars (externally supplied -- no benchmarking is done
  // here); absent when the platform refuses to report them.
  std::optional<double> host_cpu_ghz;
  std::optional<double> host_gpu_mhs;
};

inline void validate_device_api(const DeviceApiSample& s) {
  expect(s.ipd_m >= 0.050 && s.ipd_m <= 0.080, Err::MalformedJson,
         "ipd_m " + std::to_string(s.ipd_m) + " outside [0.050,0.080]");
  for (size_t i = 1; i < s.render_timestamps.size(); ++i)
    expect(s.render_timestamps[i] > s.render_timestamps[i - 1], Err::NonMonotonicTime,
           "render_timestamps not strictly increasing at index " + std::to_string(i));
}

struct LatencySample {
  std::string server_id;
  double rtt_s = 0.0;  // >= 0; results from co-located probes can reach 0 exactly
  double t = 0.0;
};

// ---------------------------------------------------------------------------
// Attacker tiers (capability classes)
// ---------------------------------------------------------------------------

enum class AttackerTier { PrivilegedI, PrivilegedII, PrivilegedIII, NonPrivileged };

inline const char* to_string(AttackerTier t) {
  switch (t) {
    case AttackerTier::PrivilegedI: return "PrivilegedI";
    case AttackerTier::PrivilegedII: return "PrivilegedII";
    case AttackerTier::PrivilegedIII: return "PrivilegedIII";
    case AttackerTier::NonPrivileged: return "NonPrivileged";
  }
  return "?";
}

inline AttackerTier tier_from_string(const std::string& s) {
  if (s == "PrivilegedI") return AttackerTier::PrivilegedI;
  if (s == "PrivilegedII") return AttackerTier::PrivilegedII;
  if (s == "PrivilegedIII") return AttackerTier::PrivilegedIII;
  if (s == "NonPrivileged") return AttackerTier::NonPrivileged;
  fail(Err::InvalidConfig, "attacker tier '" + s + "'");
}

// Capability flags per tier.  Device APIs (IPD, render timing, host system
// queries) exist only inside the client; network observation only for
// attackers sitting on the wire.
inline bool tier_has_device_api(AttackerTier t) {
  return t == AttackerTier::PrivilegedI || t == AttackerTier::PrivilegedII;
}
inline bool tier_has_network(AttackerTier t) {
  return t == AttackerTier::PrivilegedII || t == AttackerTier::PrivilegedIII;
}
// Telemetry leaves the client at the broadcast rate; only in-client attackers
// see the native tracking stream.
inline bool tier_has_native_rate_telemetry(AttackerTier t) {
  return t == AttackerTier::PrivilegedI || t == AttackerTier::PrivilegedII;
}

// ---------------------------------------------------------------------------
// Session bundle
// ---------------------------------------------------------------------------

struct SessionBundle {
  std::string session_id;  // harness bookkeeping (directory name); may be empty
  AttackerTier attacker_tier = AttackerTier::PrivilegedII;
  TelemetryTrace trace;
  std::vector<EventRecord> events;
  std::optional<DeviceApiSample> device_api;
  std::vector<LatencySample> latency;
};

inline void validate_bundle(const SessionBundle& b) {
  if (!tier_has_device_api(b.attacker_tier))
    expect(!b.device_api.has_value(), Err::InvalidBundle,
           std::string("tier ") + to_string(b.attacker_tier) + " cannot carry device_api");
  for (const LatencySample& s : b.latency)
    expect(std::isfinite(s.rtt_s) && s.rtt_s >= 0.0, Err::InvalidBundle,
           "latency sample with negative or non-finite rtt");
}

// ---------------------------------------------------------------------------
// Ground-truth profile
// ---------------------------------------------------------------------------

enum class Handedness { Left, Right };
enum class Fitness { Low, Moderate, High };
enum class VisionSeverity { None, Mild, Severe };
enum class Gender { Male, Female };
enum class Disability { None, Mental, Physical };

inline const char* to_string(Handedness h) { return h == Handedness::Left ? "left" : "right"; }
inline const char* to_string(Fitness f) {
  switch (f) {
    case Fitness::Low: return "low";
    case Fitness::Moderate: return "moderate";
    case Fitness::High: return "high";
  }
  return "?";
}
inline const char* to_string(VisionSeverity v) {
  switch (v) {
    case VisionSeverity::None: return "none";
    case VisionSeverity::Mild: return "mild";
    case VisionSeverity::Severe: return "severe";
  }
  return "?";
}
inline const char* to_string(Gender g) { return g == Gender::Male ? "male" : "female"; }
inline const char* to_string(Disability d) {
  switch (d) {
    case Disability::None: return "none";
    case Disability::Mental: return "mental";
    case Disability::Physical: return "physical";
  }
  return "?";
}

inline Handedness handedness_from_string(const std::string& s) {
  if (s == "left") return Handedness::Left;
  if (s == "right") return Handedness::Right;
  fail(Err::MalformedJson, "handedness '" + s + "'");
}
inline Fitness fitness_from_string(const std::string& s) {
  if (s == "low") return Fitness::Low;
  if (s == "moderate") return Fitness::Moderate;
  if (s == "high") return Fitness::High;
  fail(Err::MalformedJson, "fitness '" + s + "'");
}
inline VisionSeverity vision_from_string(const std::string& s) {
  if (s == "none") return VisionSeverity::None;
  if (s == "mild") return VisionSeverity::Mild;
  if (s == "severe") return VisionSeverity::Severe;
  fail(Err::MalformedJson, "vision severity '" + s + "'");
}
inline Gender gender_from_string(const std::string& s) {
  if (s == "male") return Gender::Male;
  if (s == "female") return Gender::Female;
  fail(Err::MalformedJson, "gender '" + s + "'");
}
inline Disability disability_from_string(const std::string& s) {
  if (s == "none") return Disability::None;
  if (s == "mental") return Disability::Mental;
  if (s == "physical") return Disability::Physical;
  fail(Err::MalformedJson, "disability '" + s + "'");
}

struct DeviceSpec {
  std::string model;
  double hmd_refresh_hz = 0.0;
  double tracking_rate_hz = 0.0;
  double resolution_mp = 0.0;  // total across both eyes
  double fov_deg = 0.0;
  bool validated = true;  // measured on real hardware vs vendor-sheet only
};

// Correct-answer counts per administered MoCA category; the scorer converts
// counts to points (see behavior.hpp for the rubric).
struct MocaAnswerCounts {
  int naming = 3;       // 0..3 animals named
  int serial7 = 5;      // 0..5 correct subtractions
  int recall = 5;       // 0..5 passwords recalled
  int abstraction = 2;  // 0..2 pairs abstracted
  int repetition = 2;   // 0..2 sentences repeated
  int orientation = 4;  // 0..4 of year/month/date/day
};

struct UserProfile {
  std::string user_id;
  double height_m = 1.70;
  double wingspan_m = 1.70;
  double arm_left_m = 0.72;
  double arm_right_m = 0.72;
  Handedness handedness = Handedness::Right;
  double ipd_m = 0.063;
  Fitness fitness = Fitness::Moderate;
  double reaction_time_s = 0.25;
  double room_length_m = 3.0;
  double room_width_m = 2.5;
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  DeviceSpec device;
  std::vector<std::string> languages;  // non-English codes, e.g. "zh"
  bool colorblind = false;
  VisionSeverity hyperopia = VisionSeverity::None;
  VisionSeverity myopia = VisionSeverity::None;
  MocaAnswerCounts moca_answers;
  Gender gender = Gender::Male;
  int age_years = 21;
  std::string ethnicity = "asian";
  Disability disability = Disability::None;
  // Externally-supplied host benchmark scalars (the toolkit never benchmarks).
  double host_cpu_ghz = 3.5;
  double host_gpu_mhs = 50.0;
};

inline void validate_profile(const UserProfile& p) {
  expect(p.height_m > 0.0 && std::isfinite(p.height_m), Err::InvalidProfile, "height_m");
  expect(p.wingspan_m >= 0.9 * p.height_m && p.wingspan_m <= 1.15 * p.height_m,
         Err::InvalidProfile,
         p.user_id + ": wingspan " + std::to_string(p.wingspan_m) +
             " outside [0.9,1.15] x height");
  expect(std::abs(p.arm_left_m - p.arm_right_m) <= 0.06, Err::InvalidProfile,
         p.user_id + ": |arm_left-arm_right| > 0.06 m");
  expect(p.reaction_time_s >= 0.12 && p.reaction_time_s <= 0.60, Err::InvalidProfile,
         p.user_id + ": reaction_time_s outside [0.12,0.60]");
  expect(p.ipd_m >= 0.050 && p.ipd_m <= 0.080, Err::InvalidProfile, p.user_id + ": ipd_m");
  expect(p.room_length_m > 0.0 && p.room_width_m > 0.0, Err::InvalidProfile,
         p.user_id + ": room dims");
  expect(p.lat_deg >= -90.0 && p.lat_deg <= 90.0 && p.lon_deg > -180.0 && p.lon_deg <= 180.0,
         Err::InvalidProfile, p.user_id + ": lat/lon");
  expect(p.device.hmd_refresh_hz > 0.0 && p.device.tracking_rate_hz > 0.0,
         Err::InvalidProfile, p.user_id + ": device rates");
  auto in = [](int v, int lo, int hi) { return v >= lo && v <= hi; };
  const MocaAnswerCounts& m = p.moca_answers;
  expect(in(m.naming, 0, 3) && in(m.serial7, 0, 5) && in(m.recall, 0, 5) &&
             in(m.abstraction, 0, 2) && in(m.repetition, 0, 2) && in(m.orientation, 0, 4),
         Err::InvalidProfile, p.user_id + ": moca_answers out of range");
}

// ---------------------------------------------------------------------------
// Scenario script and noise model
// ---------------------------------------------------------------------------

enum class MotionPrimitive {
  Stand,
  Turn,
  TPose,
  Squat,  // three squats within the segment
  ButtonPress,
  ExploreRoom,
  ReadNear,
  ReadFar,
  GazePanel,
  Idle,
};

inline const char* to_string(MotionPrimitive m) {
  switch (m) {
    case MotionPrimitive::Stand: return "stand";
    case MotionPrimitive::Turn: return "turn";
    case MotionPrimitive::TPose: return "t_pose";
    case MotionPrimitive::Squat: return "squat";
    case MotionPrimitive::ButtonPress: return "button_press";
    case MotionPrimitive::ExploreRoom: return "explore_room";
    case MotionPrimitive::ReadNear: return "read_near";
    case MotionPrimitive::ReadFar: return "read_far";
    case MotionPrimitive::GazePanel: return "gaze_panel";
    case MotionPrimitive::Idle: return "idle";
  }
  return "?";
}

inline MotionPrimitive primitive_from_string(const std::string& s) {
  if (s == "stand") return MotionPrimitive::Stand;
  if (s == "turn") return MotionPrimitive::Turn;
  if (s == "t_pose") return MotionPrimitive::TPose;
  if (s == "squat") return MotionPrimitive::Squat;
  if (s == "button_press") return MotionPrimitive::ButtonPress;
  if (s == "explore_room") return MotionPrimitive::ExploreRoom;
  if (s == "read_near") return MotionPrimitive::ReadNear;
  if (s == "read_far") return MotionPrimitive::ReadFar;
  if (s == "gaze_panel") return MotionPrimitive::GazePanel;
  if (s == "idle") return MotionPrimitive::Idle;
  fail(Err::InvalidConfig, "motion primitive '" + s + "'");
}

struct ScriptSegment {
  int puzzle_id = 1;  // 1..24
  double duration_s = 0.0;
  MotionPrimitive primitive = MotionPrimitive::Stand;
};

struct ScenarioScript {
  std::vector<ScriptSegment> segments;

  double total_duration_s() const {
    double sum = 0.0;
    for (const ScriptSegment& s : segments) sum += s.duration_s;
    return sum;
  }
};

inline void validate_script(const ScenarioScript& script) {
  expect(!script.segments.empty(), Err::EmptyScript, "script has no segments");
  for (const ScriptSegment& s : script.segments) {
    expect(s.duration_s > 0.0, Err::InvalidConfig, "segment duration must be > 0");
    expect(s.puzzle_id >= 1 && s.puzzle_id <= 24, Err::PuzzleIdOutOfRange,
           "script puzzle_id " + std::to_string(s.puzzle_id));
  }
}

// Calibration knobs for simulator realism.  Sigmas of 0 give the noiseless
// oracle used by the exact round-trip checks.
struct NoiseModel {
  double pos_sigma_m = 0.0;         // per-axis Gaussian on every pose position
  double ori_sigma_rad = 0.0;       // small random axis rotation on orientations
  double eye_offset_mean_m = 0.11;  // stature minus HMD-center height
  double eye_offset_sigma_m = 0.0;  // per-user draw
  double grip_offset_mean_m = 0.05; // fingertip-to-controller-origin gap
  double grip_offset_sigma_m = 0.0; // per-session draw (one per session, both hands)
  double rtt_jitter_sigma_s = 0.0;
  double time_jitter_sigma_s = 0.0; // timestamp wobble, zero-mean
  double ipd_sigma_m = 0.0;         // device-API IPD readout error
  double squat_ratio_sigma = 0.0;   // per-session wobble on squat depth ratio
  std::uint64_t seed = 0;           // folded into the session seed
};

inline NoiseModel zero_noise() { return NoiseModel{}; }

/// Defaults used by the accuracy evaluation: sigma=1 cm positions, 5 ms RTT
// jitter.  Timestamp jitter stays at runtime-clock scale (50 us): headsets
// stamp frames from a monotonic high-resolution clock, and anything coarser
// would wash out inter-arrival structure no real client exhibits.
inline NoiseModel calibrated_noise() {
  NoiseModel n;
  n.pos_sigma_m = 0.01;
  n.ori_sigma_rad = 0.01;
  n.eye_offset_sigma_m = 0.01;
  n.grip_offset_sigma_m = 0.01;
  n.rtt_jitter_sigma_s = 0.005;
  n.time_jitter_sigma_s = 5e-5;
  n.ipd_sigma_m = 0.00015;
  n.squat_ratio_sigma = 0.03;
  return n;
}

inline void validate_noise(const NoiseModel& n) {
  for (double s : {n.pos_sigma_m, n.ori_sigma_rad, n.eye_offset_sigma_m, n.grip_offset_sigma_m,
                   n.rtt_jitter_sigma_s, n.time_jitter_sigma_s, n.ipd_sigma_m,
                   n.squat_ratio_sigma})
    expect(s >= 0.0 && std::isfinite(s), Err::InvalidConfig, "noise sigma must be >= 0");
}

// ---------------------------------------------------------------------------
// Server geometry and propagation
// ---------------------------------------------------------------------------

struct ServerSite {
  std::string server_id;
  double lat_deg = 0.0;  // [-90, 90]
  double lon_deg = 0.0;  // (-180, 180]
};

struct PropagationModel {
  // Effective one-way signal speed: fiber speed (2/3 c) divided by a 1.5
  // route-inflation factor; plus a fixed processing delay per round trip.
  double v_eff_mps = 2.0e8 / 1.5;
  double proc_offset_s = 0.005;
};

inline void validate_propagation(const PropagationModel& m) {
  expect(m.v_eff_mps > 0.0 && m.v_eff_mps <= 3.0e8, Err::InvalidConfig,
         "v_eff_mps outside (0, 3e8]");
  expect(m.proc_offset_s >= 0.0, Err::InvalidConfig, "proc_offset_s < 0");
}

// ---------------------------------------------------------------------------
// Attribute report
// ---------------------------------------------------------------------------

struct AttributeValue {
  json value;          // number, string, bool, or small object (e.g. a band)
  std::string unit;    // "" for unitless
  double confidence = 1.0;
  std::string source;  // attack id that produced the value
};

struct AttributeReport {
  std::string user_id;
  AttackerTier tier = AttackerTier::PrivilegedII;
  std::map<std::string, AttributeValue> attributes;
  std::map<std::string, std::string> errors;  // attack id -> error text

  void set(const std::string& name, AttributeValue v) {
    expect(!v.source.empty(), Err::InvalidConfig, "attribute '" + name + "' without source");
    expect(attributes.emplace(name, std::move(v)).second, Err::InvalidConfig,
           "attribute '" + name + "' set twice");
  }
  bool has(const std::string& name) const { return attributes.count(name) > 0; }
  const AttributeValue& at(const std::string& name) const { return attributes.at(name); }
};

}  // namespace vrinfer
