#pragma once

// Attack orchestration: runs every extractor a session's attacker tier
// permits and collects the results into one AttributeReport.  Attacks are
// independent -- one failing (or being denied) never blocks another; failures
// land in report.errors keyed by attack id.

#include <set>
#include <string>
#include <vector>

#include "vrinfer/anthro.hpp"
#include "vrinfer/behavior.hpp"
#include "vrinfer/device.hpp"
#include "vrinfer/env.hpp"
#include "vrinfer/layout.hpp"
#include "vrinfer/scenario.hpp"
#include "vrinfer/stats.hpp"
#include "vrinfer/types.hpp"

namespace vrinfer {

// Shared attacker knowledge: game content and published infrastructure.
// None of it is per-user secret.
struct AttackContext {
  std::vector<ServerSite> servers = default_server_fleet();
  PropagationModel propagation;
  PanelLayout layout = default_panel_layout();
  std::vector<DeviceSpec> device_table = default_device_table();
};

// --- capability policy ---------------------------------------------------------

// Attributes only a privileged runtime can produce (device API and native
// poll-rate access) and those needing network observation.  The audit in the
// evaluation re-checks every report against this table.
inline bool attribute_allowed(const std::string& name, AttackerTier tier) {
  static const std::set<std::string> kPrivilegedRuntime = {
      "ipd", "tracking_rate", "refresh_rate", "device_model", "host_tier"};
  static const std::set<std::string> kNetwork = {"geo_lat", "geo_lon", "geo_residual_m",
                                                 "geo_converged"};
  if (kPrivilegedRuntime.count(name)) return tier_has_device_api(tier);
  if (kNetwork.count(name)) return tier_has_network(tier);
  return true;
}

// Capability violations in a report: attributes present that the tier could
// not legitimately have produced.  Empty means the report is clean.
inline std::vector<std::string> audit_report(const AttributeReport& report) {
  std::vector<std::string> leaks;
  for (const auto& [name, value] : report.attributes)
    if (!attribute_allowed(name, report.tier)) leaks.push_back(name);
  return leaks;
}

// --- orchestration ----------------------------------------------------------------

inline AttributeReport run_attacks(const SessionBundle& bundle, const AttackContext& ctx) {
  validate_bundle(bundle);
  AttributeReport r;
  r.user_id = bundle.session_id;
  r.tier = bundle.attacker_tier;

  auto put = [&](const std::string& name, json value, const std::string& unit,
                 const std::string& attack_id, double confidence = 1.0) {
    AttributeValue v;
    v.value = std::move(value);
    v.unit = unit;
    v.confidence = confidence;
    v.source = attack_id;
    r.set(name, std::move(v));
  };
  // Runs one attack; converts thrown extraction errors into report entries.
  auto attack = [&](const std::string& id, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      r.errors[id] = e.what();
    }
  };
  auto deny = [&](const std::string& id, const std::string& what) {
    r.errors[id] = std::string(err_name(Err::CapabilityDenied)) + ": tier " +
                   to_string(bundle.attacker_tier) + " cannot access " + what;
  };

  expect(!bundle.trace.frames.empty(), Err::TooFewFrames, "bundle trace is empty");
  const double t_end = bundle.trace.frames.back().t;
  const auto windows = puzzle_windows(bundle.events, t_end + 1.0);
  auto windows_for = [&](const std::vector<int>& ids) {
    std::vector<TimeWindow> out;
    for (int pid : ids) {
      auto it = windows.find(pid);
      if (it == windows.end()) continue;
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
  };

  // -- telemetry-only attacks (every tier) --

  attack("stature", [&] {
    double h = estimate_height(bundle.trace, windows_for(stand_calibration_puzzles()));
    put("height", round_to(h, 0.01), "m", "stature");
  });

  attack("wingspan", [&] {
    put("wingspan", round_to(estimate_wingspan(bundle.trace), 0.01), "m", "wingspan");
  });

  attack("arm_asymmetry", [&] {
    ArmComparison cmp = compare_arm_lengths(bundle.trace);
    put("longer_arm", cmp.longer, "", "arm_asymmetry");
    put("arm_delta", round_to(cmp.delta_m, 0.001), "m", "arm_asymmetry");
  });

  attack("handedness", [&] {
    put("handedness", to_string(infer_handedness(bundle.events, bundle.trace)), "",
        "handedness");
  });

  attack("squat", [&] {
    auto squat_windows = windows_for({kSquatPuzzleId});
    double h = estimate_height(bundle.trace, windows_for(stand_calibration_puzzles()));
    double ratio = estimate_squat_ratio(bundle.trace, squat_windows, h);
    put("squat_ratio", round_to(ratio, 0.001), "", "squat");
    put("fitness_low", is_low_fitness(ratio), "", "squat");
  });

  attack("reaction", [&] {
    double rt = estimate_reaction_time(bundle.events);
    put("reaction_time", rt, "s", "reaction");
    put("reaction_fast", is_fast_reaction(rt), "", "reaction");
  });

  attack("room", [&] {
    RoomDims dims = estimate_room_dims(bundle.trace);
    put("room_length", round_to(dims.length_m, 0.01), "m", "room");
    put("room_width", round_to(dims.width_m, 0.01), "m", "room");
    put("room_area", dims.area_m2, "m^2", "room");
  });

  attack("session_duration", [&] {
    put("session_duration", t_end - bundle.trace.frames.front().t, "s", "session_duration");
  });

  // -- event-log attacks (every tier) --

  attack("cognition", [&] {
    MocaScore s = score_moca(bundle.events);
    put("moca_total", s.total, "", "cognition");
    put("moca_pass", s.pass, "", "cognition");
  });

  attack("color_vision", [&] {
    put("colorblind", detect_colorblind(bundle.events), "", "color_vision");
  });

  attack("gaze_language", [&] {
    std::string lang = infer_gazed_language(bundle.trace, bundle.events, ctx.layout);
    put("languages", json::array({lang}), "", "gaze_language");
  });

  attack("read_close", [&] {
    put("hyperopia", read_succeeded(bundle.events, "close") ? "none" : "severe", "",
        "read_close");
  });

  attack("read_far", [&] {
    put("myopia", read_succeeded(bundle.events, "far") ? "none" : "severe", "",
        "read_far");
  });

  attack("refresh_band", [&] {
    RefreshEstimate est = estimate_refresh_rate(bundle.events);
    json band{{"lo", est.band_lo}};
    if (std::isfinite(est.band_hi)) band["hi"] = est.band_hi;
    else band["hi"] = nullptr;
    put("refresh_band", band, "hz", "refresh_band");
  });

  // -- privileged-runtime attacks (native poll rate / device API) --

  if (!tier_has_native_rate_telemetry(bundle.attacker_tier)) {
    deny("tracking_rate", "native-rate telemetry");
  } else {
    attack("tracking_rate", [&] {
      put("tracking_rate", estimate_tracking_rate(bundle.trace), "hz", "tracking_rate");
    });
  }

  if (!tier_has_device_api(bundle.attacker_tier)) {
    deny("ipd", "the device API");
    deny("refresh_rate", "the device API");
    deny("device_model", "the device API");
    deny("host_tier", "the device API");
  } else {
    attack("ipd", [&] {
      expect(bundle.device_api.has_value(), Err::CapabilityDenied, "no device API capture");
      put("ipd", round_to(bundle.device_api->ipd_m, 0.0001), "m", "ipd");
    });
    attack("refresh_rate", [&] {
      RefreshEstimate est = estimate_refresh_rate(bundle.device_api);
      put("refresh_rate", est.hz, "hz", "refresh_rate");
    });
    attack("device_model", [&] {
      expect(bundle.device_api.has_value(), Err::CapabilityDenied, "no device API capture");
      DeviceFeatures f;
      f.tracking_hz = estimate_tracking_rate(bundle.trace);
      f.refresh_hz = estimate_refresh_rate(bundle.device_api).hz;
      f.resolution_mp = bundle.device_api->reported_resolution_mp;
      f.fov_deg = bundle.device_api->reported_fov_deg;
      put("device_model", classify_device(f, ctx.device_table), "", "device_model");
    });
    attack("host_tier", [&] {
      expect(bundle.device_api.has_value(), Err::CapabilityDenied, "no device API capture");
      expect(bundle.device_api->host_cpu_ghz.has_value() &&
                 bundle.device_api->host_gpu_mhs.has_value(),
             Err::CapabilityDenied, "platform did not report host benchmarks");
      put("host_tier",
          to_string(host_tier(*bundle.device_api->host_cpu_ghz,
                              *bundle.device_api->host_gpu_mhs)),
          "", "host_tier");
    });
  }

  // -- network attacks --

  if (!tier_has_network(bundle.attacker_tier)) {
    deny("geolocate", "network round-trip probes");
  } else {
    attack("geolocate", [&] {
      GeoEstimate geo = geolocate(bundle.latency, ctx.servers, ctx.propagation);
      put("geo_lat", geo.lat_deg, "deg", "geolocate");
      put("geo_lon", geo.lon_deg, "deg", "geolocate");
      put("geo_residual_m", geo.residual_m, "m", "geolocate");
      put("geo_converged", geo.converged, "", "geolocate");
    });
  }

  return r;
}

}  // namespace vrinfer
