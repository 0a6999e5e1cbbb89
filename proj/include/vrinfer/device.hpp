#pragma once

// Device fingerprinting: tracking rate from telemetry timing, display refresh
// from render callbacks or the behavioral UFO test, model classification
// against a spec table, and a host price-tier bucket for externally supplied
// benchmark scalars.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vrinfer/io.hpp"
#include "vrinfer/stats.hpp"
#include "vrinfer/types.hpp"

namespace vrinfer {

// Shipped spec table (data/devices.json carries the same rows; the JSON file
// is the interchange copy, this is the compiled default).  `validated` marks
// rows measured on real hardware during the experiments; the Index row comes
// from vendor sheets only.
inline const std::vector<DeviceSpec>& default_device_table() {
  static const std::vector<DeviceSpec> table = {
      {"HTC Vive", 90.0, 90.0, 2.6, 110.0, true},
      {"Vive Pro 2", 120.0, 120.0, 12.0, 116.0, true},
      {"Quest 2", 72.0, 72.0, 7.0, 97.0, true},
      {"Valve Index", 144.0, 144.0, 4.6, 130.0, false},
  };
  return table;
}

inline constexpr const char* kDeviceTableVersion = "1";
inline constexpr const char* kUnknownDevice = "UnknownDevice";

namespace detail {

// Histogram-of-rates estimator: 1 Hz bins centered on integers pick the modal
// rate; the returned value is the median of the rates within +/-7 Hz of the
// mode.  The pure mode bin center is quantized to 1 Hz and drifts by a few
// bins under timing jitter at high rates; the windowed median keeps the
// histogram approach while meeting the sub-2.5 Hz acceptance bound.
inline double rate_from_intervals(const std::vector<double>& rates) {
  std::map<long, std::size_t> histogram;
  for (double r : rates) ++histogram[std::lround(r)];
  long mode_bin = 0;
  std::size_t mode_count = 0;
  for (const auto& [bin, count] : histogram) {
    if (count > mode_count) {
      mode_count = count;
      mode_bin = bin;
    }
  }
  std::vector<double> window;
  for (double r : rates)
    if (std::abs(r - static_cast<double>(mode_bin)) <= 7.0) window.push_back(r);
  return median(window);
}

inline std::vector<double> rates_from_timestamps(const std::vector<double>& ts) {
  std::vector<double> rates;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    double dt = ts[i] - ts[i - 1];
    if (dt > 0.0) rates.push_back(1.0 / dt);
  }
  return rates;
}

}  // namespace detail

// Tracking (pose sampling) rate.  Frames whose three poses are bit-identical
// to the predecessor are stale polls of an unchanged sample and are dropped
// before interval analysis.
inline double estimate_tracking_rate(const TelemetryTrace& trace) {
  expect(trace.frames.size() >= 100, Err::TooFewFrames,
         "need >= 100 frames, got " + std::to_string(trace.frames.size()));
  std::vector<double> ts;
  ts.reserve(trace.frames.size());
  const TelemetryFrame* prev = nullptr;
  for (const TelemetryFrame& f : trace.frames) {
    if (prev && f.hmd == prev->hmd && f.left == prev->left && f.right == prev->right)
      continue;  // stale poll
    ts.push_back(f.t);
    prev = &f;
  }
  std::vector<double> rates = detail::rates_from_timestamps(ts);
  expect(rates.size() >= 2, Err::TooFewFrames, "fewer than 2 distinct-pose intervals");
  return detail::rate_from_intervals(rates);
}

// Display refresh, privileged path: interval analysis over render callbacks.
struct RefreshEstimate {
  bool exact = true;
  double hz = 0.0;       // exact estimate when exact
  double band_lo = 0.0;  // [band_lo, band_hi) when !exact
  double band_hi = 0.0;  // +inf encoded as infinity
};

inline RefreshEstimate estimate_refresh_rate(const std::optional<DeviceApiSample>& api) {
  expect(api.has_value(), Err::CapabilityDenied, "tier has no device API access");
  expect(api->render_timestamps.size() >= 10, Err::TooFewFrames,
         "need >= 10 render timestamps");
  RefreshEstimate est;
  est.exact = true;
  est.hz = detail::rate_from_intervals(detail::rates_from_timestamps(api->render_timestamps));
  return est;
}

// Display refresh, behavioral path: the UFO test shows balloons blinking at
// the candidate rates; the player reports how many distinct balloons they
// can see.  A display refreshing at R renders exactly the balloons with
// rate <= R distinctly, so a count of k puts R in [rates[k-1], rates[k]).
inline const std::vector<double>& ufo_balloon_rates() {
  static const std::vector<double> rates = {30.0, 60.0, 90.0, 120.0, 144.0};
  return rates;
}

inline RefreshEstimate estimate_refresh_rate(const std::vector<EventRecord>& events) {
  const std::vector<double>& rates = ufo_balloon_rates();
  for (const EventRecord& e : events) {
    if (e.kind != EventKind::UfoAnswer) continue;
    expect(e.payload.contains("distinct_count"), Err::MissingUfoAnswer,
           "UfoAnswer without distinct_count");
    int count = e.payload.at("distinct_count").get<int>();
    expect(count >= 0 && count <= static_cast<int>(rates.size()), Err::MissingUfoAnswer,
           "distinct_count " + std::to_string(count) + " outside [0," +
               std::to_string(rates.size()) + "]");
    RefreshEstimate est;
    est.exact = false;
    est.band_lo = count == 0 ? 0.0 : rates[count - 1];
    est.band_hi = count == static_cast<int>(rates.size())
                      ? std::numeric_limits<double>::infinity()
                      : rates[count];
    return est;
  }
  fail(Err::MissingUfoAnswer, "no UfoAnswer event in log");
}

// Feature bundle for model classification; only tracking_hz is mandatory.
struct DeviceFeatures {
  double tracking_hz = 0.0;
  std::optional<double> refresh_hz;
  std::optional<double> resolution_mp;
  std::optional<double> fov_deg;
};

// Nearest table row under range-normalized L1 distance over the features
// present in the query; a tie yields UnknownDevice.
inline std::string classify_device(const DeviceFeatures& features,
                                   const std::vector<DeviceSpec>& table) {
  expect(!table.empty(), Err::EmptyTable, "device table is empty");

  auto range_of = [&table](auto field) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const DeviceSpec& d : table) {
      lo = std::min(lo, field(d));
      hi = std::max(hi, field(d));
    }
    double r = hi - lo;
    return r > 0.0 ? r : 1.0;
  };
  const double track_range = range_of([](const DeviceSpec& d) { return d.tracking_rate_hz; });
  const double refresh_range = range_of([](const DeviceSpec& d) { return d.hmd_refresh_hz; });
  const double res_range = range_of([](const DeviceSpec& d) { return d.resolution_mp; });
  const double fov_range = range_of([](const DeviceSpec& d) { return d.fov_deg; });

  double best = std::numeric_limits<double>::infinity();
  double second = best;
  const DeviceSpec* best_spec = nullptr;
  for (const DeviceSpec& d : table) {
    double dist = std::abs(features.tracking_hz - d.tracking_rate_hz) / track_range;
    if (features.refresh_hz)
      dist += std::abs(*features.refresh_hz - d.hmd_refresh_hz) / refresh_range;
    if (features.resolution_mp)
      dist += std::abs(*features.resolution_mp - d.resolution_mp) / res_range;
    if (features.fov_deg) dist += std::abs(*features.fov_deg - d.fov_deg) / fov_range;
    if (dist < best) {
      second = best;
      best = dist;
      best_spec = &d;
    } else if (dist < second) {
      second = dist;
    }
  }
  if (second - best <= 1e-12) return kUnknownDevice;
  return best_spec->model;
}

enum class HostTier { Budget, Midrange, Highend };

inline const char* to_string(HostTier t) {
  switch (t) {
    case HostTier::Budget: return "budget";
    case HostTier::Midrange: return "midrange";
    case HostTier::Highend: return "highend";
  }
  return "?";
}

// Price-tier bucketing of externally supplied benchmark scalars (GHz and
// megahashes/s); no benchmarking happens in this toolkit.
inline HostTier host_tier(double cpu_ghz, double gpu_mhs) {
  expect(cpu_ghz >= 0.0 && gpu_mhs >= 0.0, Err::InvalidConfig,
         "benchmark scalars must be >= 0");
  if (gpu_mhs >= 80.0 && cpu_ghz >= 4.0) return HostTier::Highend;
  if (gpu_mhs < 30.0) return HostTier::Budget;
  return HostTier::Midrange;
}

// devices.json (versioned interchange copy of the spec table).
inline json device_table_to_json(const std::vector<DeviceSpec>& table) {
  json rows = json::array();
  for (const DeviceSpec& d : table) rows.push_back(device_spec_to_json(d));
  return json{{"version", kDeviceTableVersion}, {"devices", rows}};
}

inline std::vector<DeviceSpec> device_table_from_json(const json& j) {
  std::vector<DeviceSpec> table;
  expect(j.contains("devices") && j.at("devices").is_array(), Err::MalformedJson,
         "devices.json needs a devices array");
  for (const json& row : j.at("devices")) table.push_back(device_spec_from_json(row));
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t k = i + 1; k < table.size(); ++k)
      expect(table[i].model != table[k].model, Err::MalformedJson,
             "duplicate device model '" + table[i].model + "'");
  return table;
}

}  // namespace vrinfer
