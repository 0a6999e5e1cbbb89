// Behavioral extractors: the cognitive-screen scorer against hand-worked
// event logs (including the chain rule for the countdown section), the
// color-plate reader, the gaze-ray language detector, and the reading-range
// probes.  The scorer is also closed against the answer generator: counts ->
// utterances -> score must be the identity on every section.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "vrinfer/behavior.hpp"
#include "vrinfer/layout.hpp"
#include "vrinfer/rng.hpp"
#include "vrinfer/simulate.hpp"

using namespace vrinfer;

namespace {

EventRecord spoken(double t, int puzzle, const std::string& text) {
  EventRecord e;
  e.t = t;
  e.kind = EventKind::SpokenPassword;
  e.puzzle_id = puzzle;
  e.payload = json{{"text", text}};
  return e;
}

EventRecord enter(double t, int puzzle) {
  EventRecord e;
  e.t = t;
  e.kind = EventKind::PuzzleEnter;
  e.puzzle_id = puzzle;
  e.payload = json::object();
  return e;
}

EventRecord read_attempt(double t, int puzzle, const std::string& range, bool success) {
  EventRecord e;
  e.t = t;
  e.kind = EventKind::ReadAttempt;
  e.puzzle_id = puzzle;
  e.payload = json{{"range", range}, {"success", success}};
  return e;
}

// A log that scores full marks on every orally administered section, with
// the recall sources (puzzles 2..6) spoken as distinct made-up passwords.
const std::vector<std::string> kRecallWords = {"alpha", "bravo", "charlie", "delta", "echo"};

std::vector<EventRecord> events_from(const MocaUtterances& u) {
  std::vector<EventRecord> ev;
  double t = 1.0;
  for (std::size_t i = 0; i < kRecallWords.size(); ++i)
    ev.push_back(spoken(t++, kRecallSourcePuzzles[i], kRecallWords[i]));
  ev.push_back(spoken(t++, 7, "frames"));
  ev.push_back(spoken(t++, 16, u.naming));
  for (const std::string& s : u.serial7) ev.push_back(spoken(t++, 17, s));
  ev.push_back(spoken(t++, 18, u.recall));
  ev.push_back(spoken(t++, 19, u.abstraction));
  ev.push_back(spoken(t++, 20, u.repetition));
  ev.push_back(spoken(t++, 22, u.orientation));
  return ev;
}

std::vector<EventRecord> perfect_events() {
  return events_from(make_moca_utterances(MocaAnswerCounts{}, kRecallWords));
}

// Swap the answer for one puzzle in place.
void set_answer(std::vector<EventRecord>& ev, int puzzle, const std::string& text) {
  for (EventRecord& e : ev)
    if (e.kind == EventKind::SpokenPassword && e.puzzle_id == puzzle) {
      e.payload["text"] = text;
      return;
    }
  FAIL("no spoken answer for puzzle " << puzzle);
}

// Replace the countdown utterances wholesale.
void set_serial7(std::vector<EventRecord>& ev, const std::vector<std::string>& terms) {
  std::vector<EventRecord> out;
  for (const EventRecord& e : ev)
    if (!(e.kind == EventKind::SpokenPassword && e.puzzle_id == 17)) out.push_back(e);
  double t = 100.0;
  for (const std::string& s : terms) out.push_back(spoken(t++, 17, s));
  ev = std::move(out);
}

}  // namespace

TEST_CASE("a perfect log scores the full 30 and passes") {
  MocaScore s = score_moca(perfect_events());
  CHECK(s.naming == 3);
  CHECK(s.serial7_correct == 5);
  CHECK(s.serial7_points == 3);
  CHECK(s.recall == 5);
  CHECK(s.abstraction == 2);
  CHECK(s.repetition == 2);
  CHECK(s.orientation == 4);
  CHECK(s.total == 30);
  CHECK(s.pass);
}

TEST_CASE("countdown terms are judged against the previously spoken value") {
  auto ev = perfect_events();

  SECTION("a slip does not forfeit the rest of the chain") {
    // 93 ok, 86 ok, 80 wrong, 73 = 80-7 ok again, 65 wrong (73-7 = 66).
    set_serial7(ev, {"93", "86", "80", "73", "65"});
    MocaScore s = score_moca(ev);
    CHECK(s.serial7_correct == 3);
    CHECK(s.serial7_points == 2);
  }
  SECTION("an unparsable term breaks the chain for the next one only") {
    // After "ninety", the next term is scored against 1000.
    set_serial7(ev, {"93", "ninety", "993", "986"});
    MocaScore s = score_moca(ev);
    CHECK(s.serial7_correct == 3);
  }
  SECTION("a wrong first term still anchors its successors") {
    set_serial7(ev, {"92", "85", "78", "71", "64"});
    CHECK(score_moca(ev).serial7_correct == 4);
  }
  SECTION("points rubric: 0,1,2,2,3,3") {
    const int expected[] = {0, 1, 2, 2, 3, 3};
    for (int k = 0; k <= 5; ++k) CHECK(serial7_points(k) == expected[k]);
  }
}

TEST_CASE("set-scored sections ignore order, case, punctuation, duplicates") {
  auto ev = perfect_events();

  SECTION("naming") {
    set_answer(ev, 16, "Camel!; LION; lion");
    CHECK(score_moca(ev).naming == 2);  // camel + lion, duplicate not double-counted
  }
  SECTION("recall is keyed to this session's own earlier passwords") {
    set_answer(ev, 18, "echo; Alpha; zulu");
    CHECK(score_moca(ev).recall == 2);
  }
  SECTION("recall credits nothing when the spoken words are fillers") {
    set_answer(ev, 18, "piano; window; river");
    CHECK(score_moca(ev).recall == 0);
  }
  SECTION("abstraction") {
    set_answer(ev, 19, "measurement; fruit");
    CHECK(score_moca(ev).abstraction == 1);
  }
  SECTION("repetition wants the exact sentence, modulo normalization") {
    set_answer(ev, 20,
               "I only know that John is the one to help today!; "
               "the cat always hid under the couch when dogs were in the yard");
    CHECK(score_moca(ev).repetition == 1);  // second sentence ends differently
  }
}

TEST_CASE("orientation answers are positional") {
  auto ev = perfect_events();

  SECTION("right items in the wrong slots score only the aligned ones") {
    set_answer(ev, 22, "tuesday; november; 15; 2022");
    CHECK(score_moca(ev).orientation == 2);
  }
  SECTION("a truncated answer scores its prefix") {
    set_answer(ev, 22, "2022");
    CHECK(score_moca(ev).orientation == 1);
  }
  SECTION("extra trailing items are ignored") {
    set_answer(ev, 22, "2022; november; 15; tuesday; lisbon; portugal");
    CHECK(score_moca(ev).orientation == 4);
  }
}

TEST_CASE("missing sections are reported by puzzle id") {
  std::vector<EventRecord> ev = {spoken(1.0, 16, "lion"), spoken(2.0, 22, "2022")};
  try {
    score_moca(ev);
    FAIL("expected MissingPuzzleEvents");
  } catch (const Error& e) {
    CHECK(e.code() == Err::MissingPuzzleEvents);
    CHECK(std::string(e.what()).find("7, 17, 18, 19, 20") != std::string::npos);
  }
}

TEST_CASE("scoring inverts the answer generator on every section") {
  // counts -> utterances -> events -> score must reproduce the counts: the
  // generator's fillers are disjoint from the key and its countdown switches
  // to -8 steps, so nothing is accidentally credited.
  Rng rng(20240915u);
  for (int trial = 0; trial < 200; ++trial) {
    MocaAnswerCounts c;
    c.naming = static_cast<int>(rng.below(4));
    c.serial7 = static_cast<int>(rng.below(6));
    c.recall = static_cast<int>(rng.below(6));
    c.abstraction = static_cast<int>(rng.below(3));
    c.repetition = static_cast<int>(rng.below(3));
    c.orientation = static_cast<int>(rng.below(5));

    MocaScore s = score_moca(events_from(make_moca_utterances(c, kRecallWords)));
    CHECK(s.naming == c.naming);
    CHECK(s.serial7_correct == c.serial7);
    CHECK(s.serial7_points == serial7_points(c.serial7));
    CHECK(s.recall == c.recall);
    CHECK(s.abstraction == c.abstraction);
    CHECK(s.repetition == c.repetition);
    CHECK(s.orientation == c.orientation);
    CHECK(s.total == moca_total_from_counts(c));
    CHECK(s.pass == (s.total > 26));
  }
}

TEST_CASE("the pass mark is strictly greater than 26") {
  MocaAnswerCounts c;  // perfect: 30
  c.orientation = 1;   // 11 credited + 3+3+5+2+2+1 = 27
  auto ev27 = events_from(make_moca_utterances(c, kRecallWords));
  MocaScore s27 = score_moca(ev27);
  REQUIRE(s27.total == 27);
  CHECK(s27.pass);

  c.orientation = 0;  // 26: one short
  MocaScore s26 = score_moca(events_from(make_moca_utterances(c, kRecallWords)));
  REQUIRE(s26.total == 26);
  CHECK_FALSE(s26.pass);
}

TEST_CASE("the hidden-word plate separates the two readings") {
  CHECK(detect_colorblind({spoken(1.0, kIshiharaPuzzleId, "as")}));
  CHECK_FALSE(detect_colorblind({spoken(1.0, kIshiharaPuzzleId, "Daisy.")}));

  SECTION("any other word is a protocol failure") {
    try {
      detect_colorblind({spoken(1.0, kIshiharaPuzzleId, "rose")});
      FAIL("expected UnrecognizedPassword");
    } catch (const Error& e) {
      CHECK(e.code() == Err::UnrecognizedPassword);
    }
  }
  SECTION("no plate answer at all") {
    try {
      detect_colorblind({spoken(1.0, 4, "as")});
      FAIL("expected MissingPuzzleEvents");
    } catch (const Error& e) {
      CHECK(e.code() == Err::MissingPuzzleEvents);
    }
  }
}

namespace {

// A frame whose headset sits at `pos` and looks along -z yawed by `yaw`.
TelemetryFrame gaze_frame(double t, Vec3 pos, double yaw) {
  TelemetryFrame f;
  f.t = t;
  f.hmd.position = pos;
  f.hmd.orientation = Quat::yaw(yaw);
  f.left.position = f.right.position = {0.0, 1.0, 0.0};
  return f;
}

}  // namespace

TEST_CASE("view-ray panel intersection") {
  Panel p;
  p.language = "es";
  p.center = {0.9, 1.6, -2.5};

  CHECK(ray_hits_panel({0.9, 1.6, 0.0}, {0.0, 0.0, -1.0}, p));
  // Edge-inclusive: half the width off-center still hits.
  CHECK(ray_hits_panel({0.9 + p.width_m / 2.0, 1.6, 0.0}, {0.0, 0.0, -1.0}, p));
  CHECK_FALSE(ray_hits_panel({0.9 + p.width_m / 2.0 + 0.01, 1.6, 0.0}, {0.0, 0.0, -1.0}, p));
  // Looking away from the wall, or parallel to it, never hits.
  CHECK_FALSE(ray_hits_panel({0.9, 1.6, 0.0}, {0.0, 0.0, 1.0}, p));
  CHECK_FALSE(ray_hits_panel({0.9, 1.6, 0.0}, {1.0, 0.0, 0.0}, p));
}

TEST_CASE("gazed language is the majority panel inside the signpost window") {
  PanelLayout layout = default_panel_layout();
  std::vector<EventRecord> ev = {enter(2.0, kGazePuzzleId), enter(6.0, 14)};

  TelemetryTrace trace;
  // Before the window: stare at the "ar" panel; must not count.
  for (int i = 0; i < 60; ++i)
    trace.frames.push_back(gaze_frame(0.0 + i / 60.0, {2.1, 1.6, 0.0}, 0.0));
  // Inside [2, 6): mostly "es" (head over its center), briefly "pt".
  for (int i = 0; i < 120; ++i)
    trace.frames.push_back(gaze_frame(2.0 + i / 60.0, {0.9, 1.6, 0.0}, 0.0));
  for (int i = 0; i < 30; ++i)
    trace.frames.push_back(gaze_frame(4.5 + i / 60.0, {1.5, 1.6, 0.0}, 0.0));

  CHECK(infer_gazed_language(trace, ev, layout) == "es");

  SECTION("a yawed head hits the off-axis panel") {
    // From the room center, yaw toward the "ar" panel at (2.1, 1.6, -2.5).
    double yaw = std::atan2(-2.1, 2.5);
    TelemetryTrace turned;
    for (int i = 0; i < 60; ++i)
      turned.frames.push_back(gaze_frame(3.0 + i / 60.0, {0.0, 1.6, 0.0}, yaw));
    CHECK(infer_gazed_language(turned, ev, layout) == "ar");
  }
  SECTION("rays that never cross a panel") {
    TelemetryTrace away;
    for (int i = 0; i < 60; ++i)
      away.frames.push_back(gaze_frame(3.0 + i / 60.0, {0.9, 1.6, 0.0}, kPi));
    try {
      infer_gazed_language(away, ev, layout);
      FAIL("expected NoGazeHit");
    } catch (const Error& e) {
      CHECK(e.code() == Err::NoGazeHit);
    }
  }
  SECTION("no signpost window in the log") {
    try {
      infer_gazed_language(trace, {enter(2.0, 14)}, layout);
      FAIL("expected MissingPuzzleEvents");
    } catch (const Error& e) {
      CHECK(e.code() == Err::MissingPuzzleEvents);
    }
  }
}

TEST_CASE("reading probes return the first attempt at the range") {
  std::vector<EventRecord> ev = {read_attempt(1.0, kReadNearPuzzleId, "near", true),
                                 read_attempt(2.0, kReadNearPuzzleId, "near", false),
                                 read_attempt(3.0, kReadFarPuzzleId, "far", false)};
  CHECK(read_succeeded(ev, "near"));
  CHECK_FALSE(read_succeeded(ev, "far"));

  try {
    read_succeeded({ev[0]}, "far");
    FAIL("expected MissingReadAttempt");
  } catch (const Error& e) {
    CHECK(e.code() == Err::MissingReadAttempt);
  }
}

TEST_CASE("panel layout json round-trips and rejects bad geometry") {
  PanelLayout layout = default_panel_layout();
  PanelLayout back = layout_from_json(layout_to_json(layout));
  REQUIRE(back.panels.size() == layout.panels.size());
  for (std::size_t i = 0; i < layout.panels.size(); ++i) {
    CHECK(back.panels[i].language == layout.panels[i].language);
    CHECK(back.panels[i].center.x == layout.panels[i].center.x);
    CHECK(back.panels[i].width_m == layout.panels[i].width_m);
  }

  SECTION("duplicate language") {
    layout.panels[1].language = layout.panels[0].language;
    CHECK_THROWS_AS(validate_layout(layout), Error);
  }
  SECTION("zero-size panel") {
    layout.panels[0].width_m = 0.0;
    CHECK_THROWS_AS(validate_layout(layout), Error);
  }
  SECTION("no panels at all") {
    CHECK_THROWS_AS(validate_layout(PanelLayout{}), Error);
  }
}
