#pragma once

// Session protocol scripts.  A script is the sequence of puzzle segments the
// escape-room app walks every user through; extractors key their analysis
// windows off the PuzzleEnter events the app logs at each puzzle boundary.

#include <algorithm>
#include <map>
#include <vector>

#include "vrinfer/types.hpp"

namespace vrinfer {

// Puzzles whose protocol poses the user standing still and upright; height
// extraction pools telemetry from these windows.
inline const std::vector<int>& stand_calibration_puzzles() {
  static const std::vector<int> ids = {1, 3, 4, 7, 10};
  return ids;
}

inline constexpr int kTposePuzzleId = 8;
inline constexpr int kSquatPuzzleId = 9;
inline constexpr int kReactionPuzzleId = 11;
inline constexpr int kExplorePuzzleId = 12;
inline constexpr int kGazePuzzleId = 13;
inline constexpr int kUfoPuzzleId = 15;
inline constexpr int kReadNearPuzzleId = 23;
inline constexpr int kReadFarPuzzleId = 24;
inline constexpr int kReactionTrials = 5;

// Half-open analysis window [t0, t1).
struct TimeWindow {
  double t0 = 0.0, t1 = 0.0;
  bool contains(double t) const { return t >= t0 && t < t1; }
};

// Reconstructs per-puzzle analysis windows from the event log: each
// PuzzleEnter opens a window that runs until the next PuzzleEnter (any
// puzzle) or `t_end`.  Extractors use these instead of the script, since an
// attacker only sees the log.
inline std::map<int, std::vector<TimeWindow>> puzzle_windows(
    const std::vector<EventRecord>& events, double t_end) {
  std::vector<const EventRecord*> enters;
  for (const EventRecord& e : events)
    if (e.kind == EventKind::PuzzleEnter) enters.push_back(&e);
  std::sort(enters.begin(), enters.end(),
            [](const EventRecord* a, const EventRecord* b) { return a->t < b->t; });
  std::map<int, std::vector<TimeWindow>> out;
  for (std::size_t i = 0; i < enters.size(); ++i) {
    TimeWindow w;
    w.t0 = enters[i]->t;
    w.t1 = i + 1 < enters.size() ? enters[i + 1]->t : t_end;
    if (w.t1 > w.t0) out[enters[i]->puzzle_id].push_back(w);
  }
  return out;
}

// The full 600 s / 24-puzzle protocol used for data collection.
inline ScenarioScript default_script() {
  ScenarioScript s;
  s.segments = {
      {1, 40.0, MotionPrimitive::Stand},        // welcome riddle
      {2, 15.0, MotionPrimitive::Turn},         // look around the room
      {3, 30.0, MotionPrimitive::Stand},        // wall riddle
      {4, 10.0, MotionPrimitive::Stand},
      {5, 10.0, MotionPrimitive::Stand},        // color-plate mural
      {6, 15.0, MotionPrimitive::ButtonPress},  // triple lock
      {7, 40.0, MotionPrimitive::Stand},        // animal mural
      {8, 20.0, MotionPrimitive::TPose},        // "mimic the scarecrow"
      {9, 25.0, MotionPrimitive::Squat},        // crawl-space stretch
      {10, 10.0, MotionPrimitive::Stand},
      {11, 30.0, MotionPrimitive::ButtonPress}, // whack-a-mole lights
      {12, 60.0, MotionPrimitive::ExploreRoom}, // find the hidden key
      {12, 10.0, MotionPrimitive::Stand},
      {13, 20.0, MotionPrimitive::GazePanel},   // multilingual signpost
      {14, 10.0, MotionPrimitive::Stand},
      {15, 45.0, MotionPrimitive::Idle},        // UFO spotting
      {16, 15.0, MotionPrimitive::Stand},       // name the beasts
      {17, 45.0, MotionPrimitive::Stand},       // countdown chant
      {18, 40.0, MotionPrimitive::Stand},       // recall earlier passwords
      {19, 15.0, MotionPrimitive::Stand},       // odd-one-out
      {20, 20.0, MotionPrimitive::Stand},       // echo the incantation
      {21, 10.0, MotionPrimitive::Stand},
      {22, 35.0, MotionPrimitive::Stand},       // calendar lock
      {23, 15.0, MotionPrimitive::ReadNear},    // fine print up close
      {24, 15.0, MotionPrimitive::ReadFar},     // plaque across the room
  };
  validate_script(s);
  return s;
}

// Abbreviated protocol covering every puzzle (~176 s); used for large batch
// runs where full-length telemetry is not needed.
inline ScenarioScript compact_script() {
  ScenarioScript s;
  s.segments = {
      {1, 10.0, MotionPrimitive::Stand},
      {2, 4.0, MotionPrimitive::Turn},
      {3, 6.0, MotionPrimitive::Stand},
      {4, 4.0, MotionPrimitive::Stand},
      {5, 4.0, MotionPrimitive::Stand},
      {6, 6.0, MotionPrimitive::ButtonPress},
      {7, 6.0, MotionPrimitive::Stand},
      {8, 10.0, MotionPrimitive::TPose},
      {9, 10.0, MotionPrimitive::Squat},
      {10, 4.0, MotionPrimitive::Stand},
      {11, 18.0, MotionPrimitive::ButtonPress},
      {12, 20.0, MotionPrimitive::ExploreRoom},
      {13, 8.0, MotionPrimitive::GazePanel},
      {14, 4.0, MotionPrimitive::Stand},
      {15, 10.0, MotionPrimitive::Idle},
      {16, 4.0, MotionPrimitive::Stand},
      {17, 8.0, MotionPrimitive::Stand},
      {18, 8.0, MotionPrimitive::Stand},
      {19, 4.0, MotionPrimitive::Stand},
      {20, 6.0, MotionPrimitive::Stand},
      {21, 4.0, MotionPrimitive::Stand},
      {22, 8.0, MotionPrimitive::Stand},
      {23, 5.0, MotionPrimitive::ReadNear},
      {24, 5.0, MotionPrimitive::ReadFar},
  };
  validate_script(s);
  return s;
}

}  // namespace vrinfer
