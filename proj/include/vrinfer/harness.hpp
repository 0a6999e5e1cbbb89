#pragma once

// Filesystem harness behind the CLI.  Session directories hold one user's
// artifacts (profile.json, trace.csv, events.jsonl, device_api.json,
// latency.json); the four commands move data between them.
//
// Exit codes: 0 ok, 2 unreadable/malformed input data, 3 invalid
// configuration, 4 attack recovered nothing.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "vrinfer/attacks.hpp"
#include "vrinfer/defense.hpp"
#include "vrinfer/evaluate.hpp"
#include "vrinfer/io.hpp"
#include "vrinfer/population.hpp"
#include "vrinfer/scenario.hpp"
#include "vrinfer/simulate.hpp"

namespace vrinfer {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitConfigError = 3;
inline constexpr int kExitNothingRecovered = 4;

inline int exit_code_for(Err code) {
  switch (code) {
    case Err::MalformedRow:
    case Err::NonMonotonicTime:
    case Err::UnnormalizedQuaternion:
    case Err::MalformedLine:
    case Err::UnknownKind:
    case Err::PuzzleIdOutOfRange:
    case Err::MalformedJson:
    case Err::InvalidBundle:
    case Err::NegativeLatency:
    case Err::IoFailure:
      return kExitDataError;
    default:
      return kExitConfigError;
  }
}

namespace detail {

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  expect(!ec, Err::IoFailure, "cannot create directory " + dir.string());
}

// Sorted list of subdirectories, so every run visits users in the same order.
inline std::vector<fs::path> user_dirs(const fs::path& root) {
  expect(fs::is_directory(root), Err::IoFailure, "not a directory: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace detail

// --- session directories -------------------------------------------------------

inline void save_session(const std::string& dir, const SessionBundle& bundle) {
  detail::ensure_dir(dir);
  fs::path base(dir);
  write_file((base / "trace.csv").string(), write_trace_csv(bundle.trace));
  write_file((base / "events.jsonl").string(), write_events_jsonl(bundle.events));
  if (bundle.device_api)
    write_file((base / "device_api.json").string(), device_api_to_json(*bundle.device_api).dump(2) + "\n");
  if (!bundle.latency.empty())
    write_file((base / "latency.json").string(), latency_to_json(bundle.latency).dump(2) + "\n");
}

// Reads telemetry artifacts (never profile.json) and applies the tier mask,
// so downstream code only ever sees what the attacker would.
inline SessionBundle load_session(const std::string& dir, AttackerTier tier) {
  fs::path base(dir);
  expect(fs::is_directory(base), Err::IoFailure, "not a session directory: " + dir);
  SessionBundle full;
  full.session_id = base.filename().string();
  full.attacker_tier = AttackerTier::PrivilegedII;
  full.trace = parse_trace_csv(read_file((base / "trace.csv").string()));
  full.events = parse_events_jsonl(read_file((base / "events.jsonl").string()));
  if (fs::exists(base / "device_api.json"))
    full.device_api = device_api_from_json(load_json_file((base / "device_api.json").string()));
  if (fs::exists(base / "latency.json"))
    full.latency = latency_from_json(load_json_file((base / "latency.json").string()));
  return mask_for_tier(full, tier);
}

// --- simulate ---------------------------------------------------------------------

struct SimulateOptions {
  std::size_t n_users = 10;
  std::uint64_t seed = 1;
  std::uint64_t session_seed = 0;  // 0: reuse seed; set differently to rerun the same people
  std::string out_dir;
  std::string script_path;   // empty: built-in full scenario
  std::string noise_path;    // empty: calibrated noise
  std::string servers_path;  // empty: built-in fleet
  std::string layout_path;   // empty: built-in panel wall
};

inline int cmd_simulate(const SimulateOptions& opt) {
  expect(!opt.out_dir.empty(), Err::InvalidConfig, "simulate needs --out");
  expect(opt.n_users > 0, Err::InvalidConfig, "need at least one user");
  ScenarioScript script =
      opt.script_path.empty() ? default_script() : script_from_json(load_json_file(opt.script_path));
  NoiseModel noise =
      opt.noise_path.empty() ? calibrated_noise() : noise_from_json(load_json_file(opt.noise_path));
  std::vector<ServerSite> servers = opt.servers_path.empty()
                                        ? default_server_fleet()
                                        : servers_from_json(load_json_file(opt.servers_path));
  PanelLayout layout = opt.layout_path.empty()
                           ? default_panel_layout()
                           : layout_from_json(load_json_file(opt.layout_path));
  std::uint64_t session_seed = opt.session_seed ? opt.session_seed : opt.seed;

  std::vector<UserProfile> population = sample_population(opt.n_users, opt.seed);
  detail::ensure_dir(opt.out_dir);
  json users = json::array();
  for (std::size_t k = 0; k < population.size(); ++k) {
    const UserProfile& profile = population[k];
    SessionBundle bundle =
        simulate_session(profile, script, noise, derive_seed(session_seed, k), servers, layout);
    fs::path dir = fs::path(opt.out_dir) / profile.user_id;
    save_session(dir.string(), bundle);
    write_file((dir / "profile.json").string(), profile_to_json(profile).dump(2) + "\n");
    users.push_back(profile.user_id);
  }
  json manifest{{"version", "1"},
                {"seed", opt.seed},
                {"session_seed", session_seed},
                {"n_users", opt.n_users},
                {"users", users}};
  write_file((fs::path(opt.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  return kExitOk;
}

// --- attack ----------------------------------------------------------------------

struct AttackOptions {
  std::string session_dir;
  std::string tier = "PrivilegedII";
  std::string out_path;      // empty: <session_dir>/report.json
  std::string servers_path;  // empty: built-in fleet
  std::string layout_path;
  std::string devices_path;
};

inline int cmd_attack(const AttackOptions& opt) {
  expect(!opt.session_dir.empty(), Err::InvalidConfig, "attack needs a session directory");
  AttackerTier tier = tier_from_string(opt.tier);
  AttackContext ctx;
  if (!opt.servers_path.empty())
    ctx.servers = servers_from_json(load_json_file(opt.servers_path));
  if (!opt.layout_path.empty()) ctx.layout = layout_from_json(load_json_file(opt.layout_path));
  if (!opt.devices_path.empty())
    ctx.device_table = device_table_from_json(load_json_file(opt.devices_path));

  SessionBundle bundle = load_session(opt.session_dir, tier);
  AttributeReport report = run_attacks(bundle, ctx);
  std::string out = opt.out_path.empty()
                        ? (fs::path(opt.session_dir) / "report.json").string()
                        : opt.out_path;
  write_file(out, report_to_json(report).dump(2) + "\n");
  return report.attributes.empty() ? kExitNothingRecovered : kExitOk;
}

// --- evaluate ---------------------------------------------------------------------

struct EvaluateOptions {
  std::string sessions_dir;    // user dirs containing profile.json + report.json
  std::string reports_b_dir;   // optional second run of the same people, for re-identification
  std::string out_path;        // empty: <sessions_dir>/accuracy.json
  bool with_inference = true;  // demographic models; auto-skipped when the cohort is too small
  int folds = 5;
  std::uint64_t seed = 1;
};

inline int cmd_evaluate(const EvaluateOptions& opt) {
  expect(!opt.sessions_dir.empty(), Err::InvalidConfig, "evaluate needs a sessions directory");
  std::vector<EvalPair> pairs;
  std::vector<AttributeReport> reports;
  for (const fs::path& dir : detail::user_dirs(opt.sessions_dir)) {
    if (!fs::exists(dir / "profile.json")) continue;  // not a session directory
    UserProfile profile = profile_from_json(load_json_file((dir / "profile.json").string()));
    AttributeReport report = report_from_json(load_json_file((dir / "report.json").string()));
    expect(profile.user_id == report.user_id, Err::InvalidConfig,
           "report in " + dir.string() + " belongs to " + report.user_id);
    reports.push_back(report);
    pairs.emplace_back(std::move(profile), std::move(report));
  }
  expect(!pairs.empty(), Err::InvalidConfig,
         "no sessions with profile.json + report.json under " + opt.sessions_dir);

  AccuracyReport acc = evaluate_attributes(pairs);
  merge_into(acc, evaluate_audit(reports));
  if (opt.with_inference) {
    try {
      merge_into(acc, evaluate_inference(pairs, opt.folds, opt.seed));
    } catch (const Error& e) {
      // Statistically infeasible on this cohort (too small or single-class);
      // the direct metrics above still stand.
      if (e.code() != Err::TooFewExamples && e.code() != Err::DegenerateLabels) throw;
    }
  }
  if (!opt.reports_b_dir.empty()) {
    std::vector<AttributeReport> probes;
    for (const fs::path& dir : detail::user_dirs(opt.reports_b_dir)) {
      if (!fs::exists(dir / "report.json")) continue;
      probes.push_back(report_from_json(load_json_file((dir / "report.json").string())));
    }
    expect(!probes.empty(), Err::InvalidConfig,
           "no reports under " + opt.reports_b_dir);
    merge_into(acc, evaluate_identity(reports, probes));
  }

  std::string out = opt.out_path.empty()
                        ? (fs::path(opt.sessions_dir) / "accuracy.json").string()
                        : opt.out_path;
  write_file(out, accuracy_to_json(acc).dump(2) + "\n");
  return kExitOk;
}

// --- defend ----------------------------------------------------------------------

struct DefendOptions {
  std::string in_path;  // trace.csv, or a session directory to copy with a noised trace
  std::string out_path;
  double epsilon = 1.0;
  std::uint64_t seed = 1;
  std::string bounds_path;  // empty: default play-space bounds
};

inline int cmd_defend(const DefendOptions& opt) {
  expect(!opt.in_path.empty() && !opt.out_path.empty(), Err::InvalidConfig,
         "defend needs --in and --out");
  expect(std::isfinite(opt.epsilon) && opt.epsilon > 0.0, Err::InvalidEpsilon,
         "epsilon must be finite and > 0");  // reject bad config before any IO
  PositionBounds bounds;
  if (!opt.bounds_path.empty()) bounds = bounds_from_json(load_json_file(opt.bounds_path));

  if (fs::is_directory(opt.in_path)) {
    // Defend a whole session: noised trace plus verbatim copies of the other
    // artifacts, so the result feeds straight back into `attack`.
    fs::path src(opt.in_path), dst(opt.out_path);
    TelemetryTrace trace = parse_trace_csv(read_file((src / "trace.csv").string()));
    TelemetryTrace noised = apply_bounded_laplace(trace, opt.epsilon, bounds, opt.seed);
    detail::ensure_dir(dst);
    write_file((dst / "trace.csv").string(), write_trace_csv(noised));
    for (const char* name : {"events.jsonl", "device_api.json", "latency.json", "profile.json"})
      if (fs::exists(src / name))
        write_file((dst / name).string(), read_file((src / name).string()));
    return kExitOk;
  }
  TelemetryTrace trace = parse_trace_csv(read_file(opt.in_path));
  TelemetryTrace noised = apply_bounded_laplace(trace, opt.epsilon, bounds, opt.seed);
  write_file(opt.out_path, write_trace_csv(noised));
  return kExitOk;
}

}  // namespace vrinfer
