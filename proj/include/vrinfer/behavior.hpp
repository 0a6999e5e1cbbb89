#pragma once

// Behavioral extractors: attributes recovered from the app event log (spoken
// answers, read attempts) and gaze geometry, rather than from raw pose
// coordinates.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vrinfer/layout.hpp"
#include "vrinfer/puzzles.hpp"
#include "vrinfer/scenario.hpp"
#include "vrinfer/types.hpp"

namespace vrinfer {

namespace detail {

inline std::vector<std::string> split_answers(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == kSentenceSeparator) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  for (std::string& p : parts) p = normalize_sentence(p);
  return parts;
}

// First SpokenPassword text for a puzzle, if any.
inline const std::string* first_spoken(const std::vector<EventRecord>& events, int puzzle_id) {
  for (const EventRecord& e : events)
    if (e.kind == EventKind::SpokenPassword && e.puzzle_id == puzzle_id)
      return e.payload.at("text").get_ptr<const std::string*>();
  return nullptr;
}

template <typename Key>  // any range of strings / string literals
inline int count_in_key(const std::string& text, const Key& key) {
  std::set<std::string> spoken;
  for (const std::string& p : split_answers(text)) spoken.insert(p);
  int n = 0;
  for (const auto& k : key)
    if (spoken.count(normalize_sentence(k))) ++n;
  return n;
}

}  // namespace detail

// --- cognitive screen ---------------------------------------------------------

struct MocaScore {
  int naming = 0;          // 0..3
  int serial7_correct = 0; // 0..5 chain-correct subtractions
  int serial7_points = 0;  // 0..3 per the count rubric
  int recall = 0;          // 0..5
  int abstraction = 0;     // 0..2
  int repetition = 0;      // 0..2
  int orientation = 0;     // 0..4 scored items (place/city are credited)
  int total = 0;           // 0..30
  bool pass = false;       // strictly greater than 26
};

// Scores the embedded cognitive screen from the event log.  Sections the app
// administers orally are scored against the answer key; sections it can only
// proxy (visuospatial, non-countdown attention, fluency) are credited in
// full, which is why a perfect log scores exactly 30.
inline MocaScore score_moca(const std::vector<EventRecord>& events) {
  static const std::vector<int> kRequired = {7, 16, 17, 18, 19, 20, 22};
  std::string missing;
  for (int pid : kRequired)
    if (!detail::first_spoken(events, pid))
      missing += (missing.empty() ? "" : ", ") + std::to_string(pid);
  expect(missing.empty(), Err::MissingPuzzleEvents,
         "no spoken answers for puzzles: " + missing);

  const MocaKey& key = moca_key();
  MocaScore s;

  s.naming = detail::count_in_key(*detail::first_spoken(events, 16), key.animals);

  // Countdown chain: each utterance is correct iff it is exactly the
  // previously *spoken* value minus 7 (an early slip does not forfeit the
  // rest of the chain).
  long prev = 100;
  std::vector<const EventRecord*> chain;
  for (const EventRecord& e : events)
    if (e.kind == EventKind::SpokenPassword && e.puzzle_id == 17) chain.push_back(&e);
  for (const EventRecord* e : chain) {
    const std::string text = normalize_sentence(e->payload.at("text").get<std::string>());
    char* end = nullptr;
    long v = std::strtol(text.c_str(), &end, 10);
    bool parsed = end != text.c_str() && end && *end == '\0';
    if (parsed && v == prev - 7) ++s.serial7_correct;
    prev = parsed ? v : 1000;  // unparsable: break the chain for the next term
  }
  s.serial7_points = serial7_points(s.serial7_correct);

  // Recall is scored against this session's own earlier passwords.
  std::vector<std::string> recall_key;
  for (int pid : kRecallSourcePuzzles)
    if (const std::string* t = detail::first_spoken(events, pid))
      recall_key.push_back(normalize_sentence(*t));
  s.recall = detail::count_in_key(*detail::first_spoken(events, 18), recall_key);

  s.abstraction = detail::count_in_key(*detail::first_spoken(events, 19), key.abstractions);
  s.repetition = detail::count_in_key(*detail::first_spoken(events, 20), key.sentences);

  // Orientation items are positional (year; month; date; day).
  std::vector<std::string> parts = detail::split_answers(*detail::first_spoken(events, 22));
  for (std::size_t i = 0; i < key.orientation.size() && i < parts.size(); ++i)
    if (parts[i] == normalize_sentence(key.orientation[i])) ++s.orientation;

  s.total = kMocaVisuospatialCredit + kMocaAttentionCredit + s.serial7_points +
            kMocaFluencyCredit + s.naming + s.recall + s.abstraction + s.repetition +
            s.orientation + kMocaOrientationCredit;
  s.pass = s.total > 26;
  return s;
}

// Expected score for a ground-truth answer-count record; the evaluation
// compares score_moca() output against this.
inline int moca_total_from_counts(const MocaAnswerCounts& c) {
  return kMocaVisuospatialCredit + kMocaAttentionCredit + serial7_points(c.serial7) +
         kMocaFluencyCredit + c.naming + c.recall + c.abstraction + c.repetition +
         c.orientation + kMocaOrientationCredit;
}

// --- color vision ----------------------------------------------------------------

// The hidden-word plate: normal color vision reads one word, red-green
// deficiency reads the other.  Any other answer means the protocol broke.
inline bool detect_colorblind(const std::vector<EventRecord>& events) {
  const std::string* text = detail::first_spoken(events, kIshiharaPuzzleId);
  expect(text != nullptr, Err::MissingPuzzleEvents,
         "no spoken answer for puzzle " + std::to_string(kIshiharaPuzzleId));
  std::string norm = normalize_sentence(*text);
  if (norm == kIshiharaColorblindWord) return true;
  if (norm == kIshiharaNormalWord) return false;
  fail(Err::UnrecognizedPassword, "plate answer '" + norm + "' matches neither reading");
}

// --- gaze language ------------------------------------------------------------------

// Which signpost panel the user actually read: intersect the per-frame view
// ray with the panel rectangles during the signpost windows and take the
// majority language.
inline std::string infer_gazed_language(const TelemetryTrace& trace,
                                        const std::vector<EventRecord>& events,
                                        const PanelLayout& layout) {
  validate_layout(layout);
  expect(!trace.frames.empty(), Err::TooFewFrames, "empty trace");
  auto windows = puzzle_windows(events, trace.frames.back().t + 1.0);
  auto it = windows.find(kGazePuzzleId);
  expect(it != windows.end(), Err::MissingPuzzleEvents,
         "no PuzzleEnter for puzzle " + std::to_string(kGazePuzzleId));

  std::map<std::string, int> hits;
  for (const TelemetryFrame& f : trace.frames) {
    bool inside = false;
    for (const TimeWindow& w : it->second)
      if (w.contains(f.t)) { inside = true; break; }
    if (!inside) continue;
    Vec3 dir = f.hmd.orientation.rotate({0.0, 0.0, -1.0});
    for (const Panel& p : layout.panels)
      if (ray_hits_panel(f.hmd.position, dir, p)) {
        ++hits[p.language];
        break;
      }
  }
  expect(!hits.empty(), Err::NoGazeHit, "view ray never crossed a panel");
  return std::max_element(hits.begin(), hits.end(),
                          [](const auto& a, const auto& b) { return a.second < b.second; })
      ->first;
}

// --- eyesight -------------------------------------------------------------------------

// Reading-range outcomes: a failed close read marks farsightedness, a failed
// distant read nearsightedness.  Returns the first attempt at the range.
inline bool read_succeeded(const std::vector<EventRecord>& events, const std::string& range) {
  for (const EventRecord& e : events) {
    if (e.kind != EventKind::ReadAttempt) continue;
    if (e.payload.at("range").get<std::string>() == range)
      return e.payload.at("success").get<bool>();
  }
  fail(Err::MissingReadAttempt, "no ReadAttempt at range '" + range + "'");
}

}  // namespace vrinfer
