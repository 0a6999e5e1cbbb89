#pragma once

// Bit-exact file formats: trace.csv, events.jsonl, profile.json,
// device_api.json, latency.json, servers.json, script.json, noise.json,
// report.json.  Worked examples for every format live in FORMATS.md.
//
// CSV floats are serialized with 9 significant digits; formatting a parsed
// 9-digit value reproduces the same text, so parse/write round-trips are
// byte-stable.  JSON numbers use the library's shortest-round-trip encoding
// and are lossless.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vrinfer/types.hpp"

namespace vrinfer {

// ---------------------------------------------------------------------------
// Low-level helpers
// ---------------------------------------------------------------------------

inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace detail {

inline double parse_double_strict(const std::string& field, Err code, const std::string& where) {
  expect(!field.empty(), code, where + ": empty numeric field");
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  expect(end == begin + field.size(), code, where + ": non-numeric field '" + field + "'");
  expect(std::isfinite(v), code, where + ": non-finite field '" + field + "'");
  return v;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline double json_finite_number(const json& j, const std::string& key, Err code) {
  expect(j.contains(key) && j.at(key).is_number(), code, "missing or non-numeric '" + key + "'");
  double v = j.at(key).get<double>();
  expect(std::isfinite(v), code, "non-finite '" + key + "'");
  return v;
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  expect(in.good(), Err::IoFailure, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  expect(!in.bad(), Err::IoFailure, "read failed for '" + path + "'");
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  expect(out.good(), Err::IoFailure, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  expect(out.good(), Err::IoFailure, "write failed for '" + path + "'");
}

inline json parse_json(const std::string& text, const std::string& where) {
  json j = json::parse(text, nullptr, false);
  expect(!j.is_discarded(), Err::MalformedJson, where + ": invalid JSON");
  return j;
}

inline json load_json_file(const std::string& path) {
  return parse_json(read_file(path), path);
}

// ---------------------------------------------------------------------------
// trace.csv
// ---------------------------------------------------------------------------

inline constexpr const char* kTraceCsvHeader =
    "t,hx,hy,hz,hqw,hqx,hqy,hqz,lx,ly,lz,lqw,lqx,lqy,lqz,rx,ry,rz,rqw,rqx,rqy,rqz";

inline std::string write_trace_csv(const TelemetryTrace& trace) {
  std::string out(kTraceCsvHeader);
  out += '\n';
  for (const TelemetryFrame& f : trace.frames) {
    const Pose* poses[3] = {&f.hmd, &f.left, &f.right};
    out += fmt9(f.t);
    for (const Pose* p : poses) {
      out += ',';
      out += fmt9(p->position.x);
      out += ',';
      out += fmt9(p->position.y);
      out += ',';
      out += fmt9(p->position.z);
      out += ',';
      out += fmt9(p->orientation.w);
      out += ',';
      out += fmt9(p->orientation.x);
      out += ',';
      out += fmt9(p->orientation.y);
      out += ',';
      out += fmt9(p->orientation.z);
    }
    out += '\n';
  }
  return out;
}

inline TelemetryTrace parse_trace_csv(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string line;
  expect(static_cast<bool>(std::getline(in, line)), Err::MalformedRow, "empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  expect(line == kTraceCsvHeader, Err::MalformedRow, "line 1: unexpected header '" + line + "'");

  TelemetryTrace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;  // tolerate a trailing blank line
    const std::string where = "line " + std::to_string(line_no);
    std::vector<std::string> fields = detail::split_csv(line);
    expect(fields.size() == 22, Err::MalformedRow,
           where + ": expected 22 columns, got " + std::to_string(fields.size()));
    double v[22];
    for (int i = 0; i < 22; ++i)
      v[i] = detail::parse_double_strict(fields[i], Err::MalformedRow, where);

    TelemetryFrame f;
    f.t = v[0];
    Pose* poses[3] = {&f.hmd, &f.left, &f.right};
    for (int p = 0; p < 3; ++p) {
      const double* c = v + 1 + 7 * p;
      poses[p]->position = {c[0], c[1], c[2]};
      poses[p]->orientation = {c[3], c[4], c[5], c[6]};
      expect(std::abs(poses[p]->orientation.norm() - 1.0) <= 1e-3, Err::UnnormalizedQuaternion,
             where + ": quaternion norm " + std::to_string(poses[p]->orientation.norm()));
    }
    expect(f.t >= 0.0, Err::MalformedRow, where + ": negative t");
    if (!trace.frames.empty())
      expect(f.t > trace.frames.back().t, Err::NonMonotonicTime,
             where + ": t=" + fmt9(f.t) + " <= previous t=" + fmt9(trace.frames.back().t));
    trace.frames.push_back(f);
  }
  expect(!trace.frames.empty(), Err::MalformedRow, "zero data rows");
  return trace;
}

// ---------------------------------------------------------------------------
// events.jsonl
// ---------------------------------------------------------------------------

inline std::string write_events_jsonl(const std::vector<EventRecord>& events) {
  std::string out;
  for (const EventRecord& e : events) {
    json j;
    j["t"] = e.t;
    j["kind"] = to_string(e.kind);
    j["puzzle_id"] = e.puzzle_id;
    j["payload"] = e.payload.is_null() ? json::object() : e.payload;
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::vector<EventRecord> parse_events_jsonl(const std::string& bytes) {
  std::vector<EventRecord> events;
  std::istringstream in(bytes);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    json j = json::parse(line, nullptr, false);
    expect(!j.is_discarded() && j.is_object(), Err::MalformedLine, where + "invalid JSON object");
    expect(j.contains("t") && j.at("t").is_number(), Err::MalformedLine, where + "missing t");
    expect(j.contains("kind") && j.at("kind").is_string(), Err::MalformedLine,
           where + "missing kind");
    expect(j.contains("puzzle_id") && j.at("puzzle_id").is_number_integer(), Err::MalformedLine,
           where + "missing puzzle_id");
    EventRecord e;
    e.t = j.at("t").get<double>();
    expect(std::isfinite(e.t), Err::MalformedLine, where + "non-finite t");
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    e.puzzle_id = j.at("puzzle_id").get<int>();
    e.payload = j.value("payload", json::object());
    validate_event(e, where);
    events.push_back(e);
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const EventRecord& a, const EventRecord& b) { return a.t < b.t; });
  return events;
}

// ---------------------------------------------------------------------------
// profile.json
// ---------------------------------------------------------------------------

inline json device_spec_to_json(const DeviceSpec& d) {
  return json{{"model", d.model},
              {"hmd_refresh_hz", d.hmd_refresh_hz},
              {"tracking_rate_hz", d.tracking_rate_hz},
              {"resolution_mp", d.resolution_mp},
              {"fov_deg", d.fov_deg},
              {"validated", d.validated}};
}

inline DeviceSpec device_spec_from_json(const json& j) {
  DeviceSpec d;
  expect(j.is_object() && j.contains("model"), Err::MalformedJson, "device spec needs model");
  d.model = j.at("model").get<std::string>();
  d.hmd_refresh_hz = detail::json_finite_number(j, "hmd_refresh_hz", Err::MalformedJson);
  d.tracking_rate_hz = detail::json_finite_number(j, "tracking_rate_hz", Err::MalformedJson);
  d.resolution_mp = detail::json_finite_number(j, "resolution_mp", Err::MalformedJson);
  d.fov_deg = detail::json_finite_number(j, "fov_deg", Err::MalformedJson);
  d.validated = j.value("validated", true);
  expect(d.hmd_refresh_hz > 0 && d.tracking_rate_hz > 0 && d.resolution_mp > 0 && d.fov_deg > 0,
         Err::MalformedJson, "device spec fields must be positive");
  return d;
}

inline json profile_to_json(const UserProfile& p) {
  return json{
      {"user_id", p.user_id},
      {"height_m", p.height_m},
      {"wingspan_m", p.wingspan_m},
      {"arm_left_m", p.arm_left_m},
      {"arm_right_m", p.arm_right_m},
      {"handedness", to_string(p.handedness)},
      {"ipd_m", p.ipd_m},
      {"fitness", to_string(p.fitness)},
      {"reaction_time_s", p.reaction_time_s},
      {"room_length_m", p.room_length_m},
      {"room_width_m", p.room_width_m},
      {"location", {{"lat_deg", p.lat_deg}, {"lon_deg", p.lon_deg}}},
      {"device", device_spec_to_json(p.device)},
      {"languages", p.languages},
      {"colorblind", p.colorblind},
      {"hyperopia", to_string(p.hyperopia)},
      {"myopia", to_string(p.myopia)},
      {"moca_answers",
       {{"naming", p.moca_answers.naming},
        {"serial7", p.moca_answers.serial7},
        {"recall", p.moca_answers.recall},
        {"abstraction", p.moca_answers.abstraction},
        {"repetition", p.moca_answers.repetition},
        {"orientation", p.moca_answers.orientation}}},
      {"gender", to_string(p.gender)},
      {"age_years", p.age_years},
      {"ethnicity", p.ethnicity},
      {"disability", to_string(p.disability)},
      {"host_cpu_ghz", p.host_cpu_ghz},
      {"host_gpu_mhs", p.host_gpu_mhs},
  };
}

inline UserProfile profile_from_json(const json& j) {
  expect(j.is_object(), Err::MalformedJson, "profile must be an object");
  UserProfile p;
  p.user_id = j.at("user_id").get<std::string>();
  p.height_m = detail::json_finite_number(j, "height_m", Err::MalformedJson);
  p.wingspan_m = detail::json_finite_number(j, "wingspan_m", Err::MalformedJson);
  p.arm_left_m = detail::json_finite_number(j, "arm_left_m", Err::MalformedJson);
  p.arm_right_m = detail::json_finite_number(j, "arm_right_m", Err::MalformedJson);
  p.handedness = handedness_from_string(j.at("handedness").get<std::string>());
  p.ipd_m = detail::json_finite_number(j, "ipd_m", Err::MalformedJson);
  p.fitness = fitness_from_string(j.at("fitness").get<std::string>());
  p.reaction_time_s = detail::json_finite_number(j, "reaction_time_s", Err::MalformedJson);
  p.room_length_m = detail::json_finite_number(j, "room_length_m", Err::MalformedJson);
  p.room_width_m = detail::json_finite_number(j, "room_width_m", Err::MalformedJson);
  const json& loc = j.at("location");
  p.lat_deg = detail::json_finite_number(loc, "lat_deg", Err::MalformedJson);
  p.lon_deg = detail::json_finite_number(loc, "lon_deg", Err::MalformedJson);
  p.device = device_spec_from_json(j.at("device"));
  p.languages = j.value("languages", std::vector<std::string>{});
  p.colorblind = j.at("colorblind").get<bool>();
  p.hyperopia = vision_from_string(j.at("hyperopia").get<std::string>());
  p.myopia = vision_from_string(j.at("myopia").get<std::string>());
  const json& m = j.at("moca_answers");
  p.moca_answers.naming = m.at("naming").get<int>();
  p.moca_answers.serial7 = m.at("serial7").get<int>();
  p.moca_answers.recall = m.at("recall").get<int>();
  p.moca_answers.abstraction = m.at("abstraction").get<int>();
  p.moca_answers.repetition = m.at("repetition").get<int>();
  p.moca_answers.orientation = m.at("orientation").get<int>();
  p.gender = gender_from_string(j.at("gender").get<std::string>());
  p.age_years = j.at("age_years").get<int>();
  p.ethnicity = j.at("ethnicity").get<std::string>();
  p.disability = disability_from_string(j.at("disability").get<std::string>());
  p.host_cpu_ghz = j.value("host_cpu_ghz", 3.5);
  p.host_gpu_mhs = j.value("host_gpu_mhs", 50.0);
  validate_profile(p);
  return p;
}

// ---------------------------------------------------------------------------
// device_api.json / latency.json / servers.json
// ---------------------------------------------------------------------------

inline json device_api_to_json(const DeviceApiSample& s) {
  json j{{"ipd_m", s.ipd_m},
         {"render_timestamps", s.render_timestamps},
         {"reported_resolution_mp", s.reported_resolution_mp},
         {"reported_fov_deg", s.reported_fov_deg}};
  if (s.host_cpu_ghz) j["host_cpu_ghz"] = *s.host_cpu_ghz;
  if (s.host_gpu_mhs) j["host_gpu_mhs"] = *s.host_gpu_mhs;
  return j;
}

inline DeviceApiSample device_api_from_json(const json& j) {
  DeviceApiSample s;
  s.ipd_m = detail::json_finite_number(j, "ipd_m", Err::MalformedJson);
  s.render_timestamps = j.value("render_timestamps", std::vector<double>{});
  s.reported_resolution_mp =
      detail::json_finite_number(j, "reported_resolution_mp", Err::MalformedJson);
  s.reported_fov_deg = detail::json_finite_number(j, "reported_fov_deg", Err::MalformedJson);
  if (j.contains("host_cpu_ghz")) s.host_cpu_ghz = j.at("host_cpu_ghz").get<double>();
  if (j.contains("host_gpu_mhs")) s.host_gpu_mhs = j.at("host_gpu_mhs").get<double>();
  validate_device_api(s);
  return s;
}

inline json latency_to_json(const std::vector<LatencySample>& samples) {
  json arr = json::array();
  for (const LatencySample& s : samples)
    arr.push_back({{"server_id", s.server_id}, {"rtt_s", s.rtt_s}, {"t", s.t}});
  return json{{"samples", arr}};
}

inline std::vector<LatencySample> latency_from_json(const json& j) {
  std::vector<LatencySample> out;
  for (const json& e : j.at("samples")) {
    LatencySample s;
    s.server_id = e.at("server_id").get<std::string>();
    s.rtt_s = detail::json_finite_number(e, "rtt_s", Err::MalformedJson);
    s.t = detail::json_finite_number(e, "t", Err::MalformedJson);
    expect(s.rtt_s >= 0.0, Err::MalformedJson, "rtt_s < 0");
    out.push_back(s);
  }
  return out;
}

inline json servers_to_json(const std::vector<ServerSite>& servers) {
  json arr = json::array();
  for (const ServerSite& s : servers)
    arr.push_back({{"server_id", s.server_id}, {"lat_deg", s.lat_deg}, {"lon_deg", s.lon_deg}});
  return json{{"servers", arr}};
}

inline std::vector<ServerSite> servers_from_json(const json& j) {
  std::vector<ServerSite> out;
  for (const json& e : j.at("servers")) {
    ServerSite s;
    s.server_id = e.at("server_id").get<std::string>();
    s.lat_deg = detail::json_finite_number(e, "lat_deg", Err::MalformedJson);
    s.lon_deg = detail::json_finite_number(e, "lon_deg", Err::MalformedJson);
    expect(s.lat_deg >= -90 && s.lat_deg <= 90 && s.lon_deg > -180 && s.lon_deg <= 180,
           Err::MalformedJson, "server '" + s.server_id + "' lat/lon out of range");
    for (const ServerSite& prev : out)
      expect(prev.server_id != s.server_id, Err::MalformedJson,
             "duplicate server id '" + s.server_id + "'");
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// script.json / noise.json
// ---------------------------------------------------------------------------

inline json script_to_json(const ScenarioScript& s) {
  json arr = json::array();
  for (const ScriptSegment& seg : s.segments)
    arr.push_back({{"puzzle_id", seg.puzzle_id},
                   {"duration_s", seg.duration_s},
                   {"primitive", to_string(seg.primitive)}});
  return json{{"segments", arr}};
}

inline ScenarioScript script_from_json(const json& j) {
  ScenarioScript s;
  expect(j.is_object() && j.contains("segments"), Err::InvalidConfig, "script needs segments");
  for (const json& e : j.at("segments")) {
    ScriptSegment seg;
    seg.puzzle_id = e.at("puzzle_id").get<int>();
    seg.duration_s = detail::json_finite_number(e, "duration_s", Err::InvalidConfig);
    seg.primitive = primitive_from_string(e.at("primitive").get<std::string>());
    s.segments.push_back(seg);
  }
  validate_script(s);
  return s;
}

inline json noise_to_json(const NoiseModel& n) {
  return json{{"pos_sigma_m", n.pos_sigma_m},
              {"ori_sigma_rad", n.ori_sigma_rad},
              {"eye_offset_mean_m", n.eye_offset_mean_m},
              {"eye_offset_sigma_m", n.eye_offset_sigma_m},
              {"grip_offset_mean_m", n.grip_offset_mean_m},
              {"grip_offset_sigma_m", n.grip_offset_sigma_m},
              {"rtt_jitter_sigma_s", n.rtt_jitter_sigma_s},
              {"time_jitter_sigma_s", n.time_jitter_sigma_s},
              {"ipd_sigma_m", n.ipd_sigma_m},
              {"squat_ratio_sigma", n.squat_ratio_sigma},
              {"seed", n.seed}};
}

inline NoiseModel noise_from_json(const json& j) {
  NoiseModel n;
  n.pos_sigma_m = j.value("pos_sigma_m", 0.0);
  n.ori_sigma_rad = j.value("ori_sigma_rad", 0.0);
  n.eye_offset_mean_m = j.value("eye_offset_mean_m", 0.11);
  n.eye_offset_sigma_m = j.value("eye_offset_sigma_m", 0.0);
  n.grip_offset_mean_m = j.value("grip_offset_mean_m", 0.05);
  n.grip_offset_sigma_m = j.value("grip_offset_sigma_m", 0.0);
  n.rtt_jitter_sigma_s = j.value("rtt_jitter_sigma_s", 0.0);
  n.time_jitter_sigma_s = j.value("time_jitter_sigma_s", 0.0);
  n.ipd_sigma_m = j.value("ipd_sigma_m", 0.0);
  n.squat_ratio_sigma = j.value("squat_ratio_sigma", 0.0);
  n.seed = j.value("seed", static_cast<std::uint64_t>(0));
  validate_noise(n);
  return n;
}

// ---------------------------------------------------------------------------
// report.json
// ---------------------------------------------------------------------------

inline json report_to_json(const AttributeReport& r) {
  json attrs = json::object();
  for (const auto& [name, a] : r.attributes)
    attrs[name] = json{{"value", a.value},
                       {"unit", a.unit},
                       {"confidence", a.confidence},
                       {"source", a.source}};
  return json{{"user_id", r.user_id},
              {"tier", to_string(r.tier)},
              {"attributes", attrs},
              {"errors", r.errors}};
}

inline AttributeReport report_from_json(const json& j) {
  AttributeReport r;
  r.user_id = j.at("user_id").get<std::string>();
  r.tier = tier_from_string(j.at("tier").get<std::string>());
  for (const auto& [name, a] : j.at("attributes").items()) {
    AttributeValue v;
    v.value = a.at("value");
    v.unit = a.value("unit", "");
    v.confidence = a.value("confidence", 1.0);
    v.source = a.at("source").get<std::string>();
    r.set(name, v);
  }
  if (j.contains("errors"))
    for (const auto& [name, msg] : j.at("errors").items())
      r.errors[name] = msg.get<std::string>();
  return r;
}

}  // namespace vrinfer
