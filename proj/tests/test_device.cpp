// Device fingerprinting: rate estimation from timing, the behavioral refresh
// band, spec-table classification, and host-tier bucketing.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vrinfer/device.hpp"
#include "vrinfer/rng.hpp"

using namespace vrinfer;

namespace {

TelemetryTrace trace_at_rate(double hz, double jitter_sigma_s, std::uint64_t seed,
                             double duration_s = 20.0) {
  TelemetryTrace t;
  t.nominal_rate_hz = hz;
  Rng r(seed);
  int n = static_cast<int>(duration_s * hz);
  double prev = -1.0;
  for (int i = 0; i < n; ++i) {
    TelemetryFrame f;
    f.t = std::max(i / hz + r.normal(0.0, jitter_sigma_s), prev + 1e-9);
    prev = f.t;
    // Drift the pose so no frame reads as a stale poll.
    f.hmd.position = {0.0, 1.6 + 1e-4 * i, 0.0};
    t.frames.push_back(f);
  }
  return t;
}

}  // namespace

TEST_CASE("tracking rate is exact on clean timing") {
  for (double hz : {72.0, 90.0, 120.0, 144.0})
    CHECK(estimate_tracking_rate(trace_at_rate(hz, 0.0, 1)) == Catch::Approx(hz).margin(1e-6));
}

TEST_CASE("tracking rate holds within 2.5 hz under runtime-clock jitter") {
  for (double hz : {72.0, 90.0, 120.0, 144.0})
    for (std::uint64_t seed : {2ULL, 3ULL, 4ULL}) {
      double est = estimate_tracking_rate(trace_at_rate(hz, 5e-5, seed));
      INFO("rate " << hz << " seed " << seed);
      CHECK(std::fabs(est - hz) < 2.5);
    }
}

TEST_CASE("stale polls are dropped before interval analysis") {
  // A 30 Hz poller reading a 90 Hz tracker three times per sample would see
  // 90 Hz after dedup.  Build 90 Hz frames and duplicate each pose twice at
  // finer timestamps.
  TelemetryTrace base = trace_at_rate(90.0, 0.0, 5);
  TelemetryTrace polled;
  polled.nominal_rate_hz = 270.0;
  for (const TelemetryFrame& f : base.frames)
    for (int k = 0; k < 3; ++k) {
      TelemetryFrame copy = f;  // same pose: a stale poll
      copy.t = f.t + k / 270.0;
      polled.frames.push_back(copy);
    }
  CHECK(estimate_tracking_rate(polled) == Catch::Approx(90.0).margin(1e-6));
}

TEST_CASE("tracking rate needs enough frames") {
  TelemetryTrace tiny = trace_at_rate(90.0, 0.0, 6, 0.5);
  CHECK_THROWS_AS(estimate_tracking_rate(tiny), Error);
}

TEST_CASE("render-callback refresh estimation is exact") {
  DeviceApiSample api;
  api.ipd_m = 0.063;
  for (int i = 0; i < 600; ++i) api.render_timestamps.push_back(i / 120.0);
  RefreshEstimate est = estimate_refresh_rate(std::optional<DeviceApiSample>(api));
  CHECK(est.exact);
  CHECK(est.hz == Catch::Approx(120.0).margin(1e-9));
  CHECK_THROWS_AS(estimate_refresh_rate(std::optional<DeviceApiSample>()), Error);
}

TEST_CASE("ufo answer maps to the refresh band between candidate rates") {
  auto answer = [](int count) {
    std::vector<EventRecord> ev;
    ev.push_back({10.0, EventKind::UfoAnswer, 15, json{{"distinct_count", count}}});
    return ev;
  };
  const std::vector<double>& rates = ufo_balloon_rates();  // 30 60 90 120 144
  for (int count = 0; count <= 5; ++count) {
    RefreshEstimate est = estimate_refresh_rate(answer(count));
    CHECK_FALSE(est.exact);
    if (count == 0) {
      CHECK(est.band_lo == 0.0);
      CHECK(est.band_hi == 30.0);
    } else if (count == 5) {
      CHECK(est.band_lo == 144.0);
      CHECK(std::isinf(est.band_hi));
    } else {
      CHECK(est.band_lo == rates[count - 1]);
      CHECK(est.band_hi == rates[count]);
    }
  }
  // Real displays in the spec table fall inside their own bands.
  // 72 Hz shows 30 and 60 distinctly -> count 2 -> [60, 90).
  RefreshEstimate quest = estimate_refresh_rate(answer(2));
  CHECK(quest.band_lo <= 72.0);
  CHECK(72.0 < quest.band_hi);

  CHECK_THROWS_AS(estimate_refresh_rate(std::vector<EventRecord>{}), Error);
  CHECK_THROWS_AS(estimate_refresh_rate(answer(6)), Error);
}

TEST_CASE("device classification matches exact and near-exact specs") {
  const std::vector<DeviceSpec>& table = default_device_table();
  for (const DeviceSpec& d : table) {
    DeviceFeatures f;
    f.tracking_hz = d.tracking_rate_hz;
    f.refresh_hz = d.hmd_refresh_hz;
    f.resolution_mp = d.resolution_mp;
    f.fov_deg = d.fov_deg;
    CHECK(classify_device(f, table) == d.model);
    // Small measurement error must not flip the verdict.
    f.tracking_hz += 1.5;
    f.refresh_hz = *f.refresh_hz - 2.0;
    f.resolution_mp = *f.resolution_mp + 0.2;
    CHECK(classify_device(f, table) == d.model);
  }
}

TEST_CASE("device classification with tracking rate alone still separates the table") {
  // All four table rows have distinct tracking rates, so rate alone decides.
  const std::vector<DeviceSpec>& table = default_device_table();
  for (const DeviceSpec& d : table) {
    DeviceFeatures f;
    f.tracking_hz = d.tracking_rate_hz + 1.0;
    CHECK(classify_device(f, table) == d.model);
  }
}

TEST_CASE("an exact tie yields UnknownDevice") {
  std::vector<DeviceSpec> table = {
      {"TwinA", 90.0, 90.0, 5.0, 110.0, true},
      {"TwinB", 90.0, 90.0, 5.0, 110.0, true},
  };
  DeviceFeatures f;
  f.tracking_hz = 90.0;
  CHECK(classify_device(f, table) == kUnknownDevice);
  CHECK_THROWS_AS(classify_device(f, {}), Error);
}

TEST_CASE("host tier buckets follow the benchmark thresholds") {
  CHECK(host_tier(4.0, 80.0) == HostTier::Highend);   // both thresholds inclusive
  CHECK(host_tier(4.5, 120.0) == HostTier::Highend);
  CHECK(host_tier(3.9, 80.0) == HostTier::Midrange);  // cpu short of 4.0
  CHECK(host_tier(4.5, 79.9) == HostTier::Midrange);  // gpu short of 80
  CHECK(host_tier(4.5, 29.9) == HostTier::Budget);    // gpu below 30
  CHECK(host_tier(2.0, 30.0) == HostTier::Midrange);
  CHECK(host_tier(2.0, 0.0) == HostTier::Budget);
  CHECK_THROWS_AS(host_tier(-1.0, 50.0), Error);
}

TEST_CASE("device table json round-trip rejects duplicate models") {
  std::vector<DeviceSpec> table = default_device_table();
  std::vector<DeviceSpec> q = device_table_from_json(device_table_to_json(table));
  REQUIRE(q.size() == table.size());
  CHECK(q[1].model == table[1].model);
  CHECK(q[1].resolution_mp == table[1].resolution_mp);
  CHECK(q[3].validated == table[3].validated);

  json dup = device_table_to_json(table);
  dup["devices"][2]["model"] = table[0].model;
  CHECK_THROWS_AS(device_table_from_json(dup), Error);
}
