// File formats: byte-stable CSV round-trips, line-numbered diagnostics, and
// lossless JSON round-trips for every artifact.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "vrinfer/env.hpp"
#include "vrinfer/io.hpp"
#include "vrinfer/population.hpp"
#include "vrinfer/scenario.hpp"

using namespace vrinfer;

namespace {

TelemetryTrace small_trace() {
  TelemetryTrace t;
  t.nominal_rate_hz = 90.0;
  Rng r(21);
  double time = 0.0;
  for (int i = 0; i < 25; ++i) {
    TelemetryFrame f;
    f.t = time;
    time += 1.0 / 90.0 + r.uniform(0, 1e-4);
    f.hmd.position = {r.uniform(-2, 2), r.uniform(0, 2), r.uniform(-2, 2)};
    f.hmd.orientation = Quat::yaw(r.uniform(-3, 3));
    f.left.position = {r.uniform(-2, 2), r.uniform(0, 2), r.uniform(-2, 2)};
    f.left.orientation = Quat::from_axis_angle({1, 0, 0}, r.uniform(-1, 1));
    f.right.position = {r.uniform(-2, 2), r.uniform(0, 2), r.uniform(-2, 2)};
    f.right.orientation = Quat::from_axis_angle({0, 0, 1}, r.uniform(-1, 1));
    t.frames.push_back(f);
  }
  return t;
}

}  // namespace

TEST_CASE("trace csv write/parse round-trip is byte-stable") {
  TelemetryTrace t = small_trace();
  std::string first = write_trace_csv(t);
  TelemetryTrace parsed = parse_trace_csv(first);
  REQUIRE(parsed.frames.size() == t.frames.size());
  // 9 significant digits: parsed values sit within 1e-8 relative of the
  // originals, and a second serialization reproduces the bytes exactly.
  for (std::size_t i = 0; i < t.frames.size(); ++i) {
    CHECK(parsed.frames[i].t == Catch::Approx(t.frames[i].t).epsilon(1e-8));
    CHECK(parsed.frames[i].hmd.position.x ==
          Catch::Approx(t.frames[i].hmd.position.x).margin(1e-7));
    CHECK(parsed.frames[i].right.orientation.z ==
          Catch::Approx(t.frames[i].right.orientation.z).margin(1e-7));
  }
  CHECK(write_trace_csv(parsed) == first);
}

TEST_CASE("trace csv diagnostics carry line numbers") {
  std::string good = write_trace_csv(small_trace());

  SECTION("bad header") {
    try {
      parse_trace_csv("time,x,y\n");
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == Err::MalformedRow);
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }
  SECTION("wrong column count") {
    std::string text(kTraceCsvHeader);
    text += "\n1.0,2.0,3.0\n";
    try {
      parse_trace_csv(text);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == Err::MalformedRow);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
      CHECK(std::string(e.what()).find("22") != std::string::npos);
    }
  }
  SECTION("non-numeric field") {
    std::string text = good;
    std::size_t pos = text.find('\n', text.find('\n') + 1);  // into row 2
    text.replace(pos + 1, text.find(',', pos + 1) - pos - 1, "oops");
    try {
      parse_trace_csv(text);
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == Err::MalformedRow);
      CHECK(std::string(e.what()).find("oops") != std::string::npos);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SECTION("non-monotonic time") {
    TelemetryTrace t = small_trace();
    t.frames[5].t = t.frames[4].t;  // duplicate timestamp
    try {
      parse_trace_csv(write_trace_csv(t));
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == Err::NonMonotonicTime);
      CHECK(std::string(e.what()).find("line 7") != std::string::npos);  // header + 6 rows
    }
  }
  SECTION("zero data rows") {
    CHECK_THROWS_AS(parse_trace_csv(std::string(kTraceCsvHeader) + "\n"), Error);
  }
}

TEST_CASE("trace csv parser tolerates capture wobble but not garbage quaternions") {
  TelemetryTrace t = small_trace();
  t.frames[0].hmd.orientation = {0.9995, 0.0, 0.0, 0.0};  // norm off by 5e-4: fine
  TelemetryTrace parsed = parse_trace_csv(write_trace_csv(t));
  CHECK(parsed.frames[0].hmd.orientation.w == Catch::Approx(0.9995));

  t.frames[0].hmd.orientation = {0.9, 0.0, 0.0, 0.0};  // norm off by 0.1: rejected
  try {
    parse_trace_csv(write_trace_csv(t));
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Err::UnnormalizedQuaternion);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("trace csv accepts crlf and a trailing blank line") {
  std::string text = write_trace_csv(small_trace());
  std::string crlf;
  for (char c : text) {
    if (c == '\n') crlf += "\r\n";
    else crlf += c;
  }
  crlf += "\r\n";
  CHECK(parse_trace_csv(crlf).frames.size() == 25);
}

TEST_CASE("events jsonl round-trips and sorts by time") {
  std::vector<EventRecord> events;
  events.push_back({3.5, EventKind::SpokenPassword, 4, json{{"text", "church"}}});
  events.push_back({1.25, EventKind::PuzzleEnter, 4, json::object()});
  events.push_back({2.0, EventKind::ButtonPress, 6, json{{"hand", "left"}}});
  events.push_back({2.0, EventKind::StimulusShown, 11, json::object()});  // tie: input order kept
  std::string text = write_events_jsonl(events);

  std::vector<EventRecord> parsed = parse_events_jsonl(text);
  REQUIRE(parsed.size() == 4);
  CHECK(parsed[0].t == 1.25);
  CHECK(parsed[0].kind == EventKind::PuzzleEnter);
  CHECK(parsed[1].kind == EventKind::ButtonPress);  // stable for the 2.0 tie
  CHECK(parsed[2].kind == EventKind::StimulusShown);
  CHECK(parsed[3].payload.at("text") == "church");
  CHECK(write_events_jsonl(parse_events_jsonl(write_events_jsonl(parsed))) ==
        write_events_jsonl(parsed));
}

TEST_CASE("events jsonl diagnostics") {
  SECTION("invalid json names the line") {
    try {
      parse_events_jsonl("{\"t\":0,\"kind\":\"PuzzleEnter\",\"puzzle_id\":1}\nnot json\n");
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == Err::MalformedLine);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SECTION("unknown kind") {
    CHECK_THROWS_AS(parse_events_jsonl("{\"t\":0,\"kind\":\"Telekinesis\",\"puzzle_id\":1}\n"),
                    Error);
  }
  SECTION("puzzle id range") {
    try {
      parse_events_jsonl("{\"t\":0,\"kind\":\"PuzzleEnter\",\"puzzle_id\":25}\n");
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == Err::PuzzleIdOutOfRange);
    }
  }
  SECTION("button press needs a hand") {
    CHECK_THROWS_AS(parse_events_jsonl("{\"t\":0,\"kind\":\"ButtonPress\",\"puzzle_id\":6}\n"),
                    Error);
    CHECK_THROWS_AS(parse_events_jsonl(
                        "{\"t\":0,\"kind\":\"ButtonPress\",\"puzzle_id\":6,"
                        "\"payload\":{\"hand\":\"both\"}}\n"),
                    Error);
  }
  SECTION("blank lines are skipped") {
    CHECK(parse_events_jsonl("\n{\"t\":0,\"kind\":\"PuzzleEnter\",\"puzzle_id\":1}\n\n").size() ==
          1);
  }
}

TEST_CASE("profile json round-trip is lossless") {
  for (const UserProfile& p : sample_population(5, 404)) {
    json j = profile_to_json(p);
    UserProfile q = profile_from_json(j);
    CHECK(profile_to_json(q) == j);
    CHECK(q.user_id == p.user_id);
    CHECK(q.height_m == p.height_m);
    CHECK(q.arm_left_m == p.arm_left_m);
    CHECK(q.ipd_m == p.ipd_m);
    CHECK(q.handedness == p.handedness);
    CHECK(q.languages == p.languages);
    CHECK(q.moca_answers.serial7 == p.moca_answers.serial7);
    CHECK(q.device.model == p.device.model);
    CHECK(q.lat_deg == p.lat_deg);
    CHECK(q.host_gpu_mhs == p.host_gpu_mhs);
  }
}

TEST_CASE("device api json round-trip covers optional host scalars") {
  DeviceApiSample s;
  s.ipd_m = 0.0641;
  s.render_timestamps = {0.0, 1.0 / 120, 2.0 / 120, 3.0 / 120};
  s.reported_resolution_mp = 12.0;
  s.reported_fov_deg = 116.0;
  SECTION("present") {
    s.host_cpu_ghz = 4.2;
    s.host_gpu_mhs = 91.0;
    DeviceApiSample q = device_api_from_json(device_api_to_json(s));
    CHECK(q.ipd_m == s.ipd_m);
    CHECK(q.render_timestamps == s.render_timestamps);
    REQUIRE(q.host_cpu_ghz.has_value());
    CHECK(*q.host_cpu_ghz == 4.2);
    CHECK(*q.host_gpu_mhs == 91.0);
  }
  SECTION("absent") {
    DeviceApiSample q = device_api_from_json(device_api_to_json(s));
    CHECK_FALSE(q.host_cpu_ghz.has_value());
    CHECK_FALSE(q.host_gpu_mhs.has_value());
  }
  SECTION("ipd bounds enforced") {
    s.ipd_m = 0.049;
    CHECK_THROWS_AS(device_api_from_json(device_api_to_json(s)), Error);
  }
}

TEST_CASE("latency json round-trip rejects negative rtt") {
  std::vector<LatencySample> v{{"eu-frankfurt", 0.045, 12.0}, {"ap-tokyo", 0.161, 13.0}};
  std::vector<LatencySample> q = latency_from_json(latency_to_json(v));
  REQUIRE(q.size() == 2);
  CHECK(q[0].server_id == "eu-frankfurt");
  CHECK(q[1].rtt_s == 0.161);

  json bad = latency_to_json(v);
  bad["samples"][0]["rtt_s"] = -0.001;
  CHECK_THROWS_AS(latency_from_json(bad), Error);
}

TEST_CASE("servers json validates ids and coordinates") {
  std::vector<ServerSite> fleet = default_server_fleet();
  std::vector<ServerSite> q = servers_from_json(servers_to_json(fleet));
  REQUIRE(q.size() == fleet.size());
  CHECK(q[0].server_id == fleet[0].server_id);
  CHECK(q[3].lon_deg == fleet[3].lon_deg);

  json dup = servers_to_json(fleet);
  dup["servers"][1]["server_id"] = fleet[0].server_id;
  CHECK_THROWS_AS(servers_from_json(dup), Error);

  json range = servers_to_json(fleet);
  range["servers"][0]["lat_deg"] = 91.0;
  CHECK_THROWS_AS(servers_from_json(range), Error);
}

TEST_CASE("script json round-trip preserves the segment list") {
  ScenarioScript s = default_script();
  ScenarioScript q = script_from_json(script_to_json(s));
  REQUIRE(q.segments.size() == s.segments.size());
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    CHECK(q.segments[i].puzzle_id == s.segments[i].puzzle_id);
    CHECK(q.segments[i].duration_s == s.segments[i].duration_s);
    CHECK(q.segments[i].primitive == s.segments[i].primitive);
  }
  CHECK_THROWS_AS(script_from_json(json{{"segments", json::array()}}), Error);
}

TEST_CASE("noise json round-trip and defaults") {
  NoiseModel n = calibrated_noise();
  n.seed = 77;
  NoiseModel q = noise_from_json(noise_to_json(n));
  CHECK(q.pos_sigma_m == n.pos_sigma_m);
  CHECK(q.time_jitter_sigma_s == n.time_jitter_sigma_s);
  CHECK(q.seed == 77);
  // Omitted fields take the documented defaults.
  NoiseModel sparse = noise_from_json(json{{"pos_sigma_m", 0.02}});
  CHECK(sparse.pos_sigma_m == 0.02);
  CHECK(sparse.eye_offset_mean_m == 0.11);
  CHECK(sparse.grip_offset_mean_m == 0.05);
  CHECK(sparse.rtt_jitter_sigma_s == 0.0);
  CHECK_THROWS_AS(noise_from_json(json{{"pos_sigma_m", -0.01}}), Error);
}

TEST_CASE("report json round-trip keeps attributes, units and errors") {
  AttributeReport r;
  r.user_id = "user_007";
  r.tier = AttackerTier::PrivilegedIII;
  AttributeValue height;
  height.value = 1.83;
  height.unit = "m";
  height.confidence = 0.9;
  height.source = "stature";
  r.set("height", height);
  AttributeValue langs;
  langs.value = json::array({"fr"});
  langs.source = "gaze_language";
  r.set("languages", langs);
  r.errors["ipd"] = "CapabilityDenied: tier PrivilegedIII cannot access the device API";

  AttributeReport q = report_from_json(report_to_json(r));
  CHECK(q.user_id == "user_007");
  CHECK(q.tier == AttackerTier::PrivilegedIII);
  CHECK(q.at("height").value.get<double>() == 1.83);
  CHECK(q.at("height").unit == "m");
  CHECK(q.at("height").confidence == 0.9);
  CHECK(q.at("languages").value[0] == "fr");
  CHECK(q.errors.at("ipd").find("CapabilityDenied") == 0);
  CHECK(report_to_json(q) == report_to_json(r));
}

TEST_CASE("read_file raises IoFailure for missing paths") {
  try {
    read_file("/nonexistent/vrinfer/file.csv");
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Err::IoFailure);
  }
}
