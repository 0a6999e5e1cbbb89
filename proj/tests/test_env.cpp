// Environment recovery: great-circle geometry, play-space estimation, and
// latency multilateration.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vrinfer/env.hpp"
#include "vrinfer/rng.hpp"
#include "vrinfer/simulate.hpp"

using namespace vrinfer;

TEST_CASE("great-circle distance matches analytic cases") {
  // One degree of longitude along the equator: R * pi/180.
  CHECK(great_circle_m(0, 0, 0, 1) == Catch::Approx(kEarthRadiusM * kPi / 180.0).epsilon(1e-9));
  // Pole to pole: half the circumference.
  CHECK(great_circle_m(90, 0, -90, 0) == Catch::Approx(kPi * kEarthRadiusM).epsilon(1e-9));
  // Antipodal points on the equator.
  CHECK(great_circle_m(0, 10, 0, -170) == Catch::Approx(kPi * kEarthRadiusM).epsilon(1e-9));
  // Symmetry and identity.
  CHECK(great_circle_m(48.1, 11.6, 35.7, 139.7) ==
        Catch::Approx(great_circle_m(35.7, 139.7, 48.1, 11.6)));
  CHECK(great_circle_m(48.1, 11.6, 48.1, 11.6) == 0.0);
  // Meridian arc: one degree of latitude is the same length anywhere.
  CHECK(great_circle_m(20, 33, 21, 33) == Catch::Approx(great_circle_m(-50, 8, -49, 8)));
}

TEST_CASE("rtt converts to one-way distance with the processing offset removed") {
  PropagationModel m;  // v_eff = 2e8/1.5, proc 5 ms
  LatencySample s{"x", 0.0, 0.0};
  s.rtt_s = m.proc_offset_s;  // pure processing: zero distance
  CHECK(rtt_to_distance(s, m) == 0.0);
  s.rtt_s = m.proc_offset_s + 2.0 * 1000000.0 / m.v_eff_mps;  // 1000 km each way
  CHECK(rtt_to_distance(s, m) == Catch::Approx(1000000.0).epsilon(1e-12));
  s.rtt_s = 0.001;  // below the offset: clamps to zero rather than negative
  CHECK(rtt_to_distance(s, m) == 0.0);
}

TEST_CASE("room dims come from the 1/99 percentile spread plus clearance") {
  // 1000 frames sweeping x in [-1.5, 1.5], z in [-1.0, 1.0] uniformly on a
  // grid: p99-p1 of x = 2.94 (nearest-rank on the 10/990 ranks), +0.5 margin.
  TelemetryTrace t;
  for (int i = 0; i < 1000; ++i) {
    TelemetryFrame f;
    f.t = 0.01 * i;
    double u = i / 999.0;
    f.hmd.position = {-1.5 + 3.0 * u, 1.6, -1.0 + 2.0 * u};
    t.frames.push_back(f);
  }
  RoomDims dims = estimate_room_dims(t);
  // x values: -1.5 + 3*(i/999).  p1 = 10th smallest = i=9; p99 = i=989.
  double p1 = -1.5 + 3.0 * (9.0 / 999.0), p99 = -1.5 + 3.0 * (989.0 / 999.0);
  CHECK(dims.length_m == Catch::Approx(p99 - p1 + 0.5).margin(1e-12));
  CHECK(dims.area_m2 == std::round(dims.length_m * dims.width_m));

  // The spread ignores the outlying 1%: teleport glitches do not grow the room.
  TelemetryFrame glitch;
  glitch.t = 1000.0;
  glitch.hmd.position = {50.0, 1.6, 50.0};
  t.frames.push_back(glitch);
  RoomDims with_glitch = estimate_room_dims(t);
  CHECK(with_glitch.length_m == Catch::Approx(dims.length_m).margin(0.02));
}

TEST_CASE("multilateration recovers the source with clean rtts") {
  std::vector<ServerSite> fleet = default_server_fleet();
  PropagationModel model;
  Rng rng(17);
  // A handful of true locations spread across the fleet's footprint.
  const double spots[][2] = {{48.1, 11.6}, {37.77, -122.42}, {40.7, -74.0}, {1.35, 103.8}};
  for (const auto& spot : spots) {
    std::vector<LatencySample> samples =
        simulate_latency(spot[0], spot[1], fleet, 0.0, 30.0, rng, model, 3);
    GeoEstimate est = geolocate(samples, fleet, model);
    INFO("true location " << spot[0] << "," << spot[1]);
    CHECK(est.converged);
    CHECK(great_circle_m(est.lat_deg, est.lon_deg, spot[0], spot[1]) < 10000.0);  // 10 km
    CHECK(est.residual_m < 10000.0);
  }
}

TEST_CASE("multilateration degrades gracefully with jitter") {
  std::vector<ServerSite> fleet = default_server_fleet();
  PropagationModel model;
  Rng rng(18);
  std::vector<LatencySample> samples =
      simulate_latency(46.05, 14.51, fleet, 0.005, 60.0, rng, model, 8);
  GeoEstimate est = geolocate(samples, fleet, model);
  CHECK(great_circle_m(est.lat_deg, est.lon_deg, 46.05, 14.51) < 500000.0);  // 500 km
}

TEST_CASE("multilateration refuses underdetermined input") {
  std::vector<ServerSite> fleet = default_server_fleet();
  PropagationModel model;
  std::vector<LatencySample> two{{"eu-frankfurt", 0.02, 0.0}, {"ap-tokyo", 0.09, 1.0}};
  CHECK_THROWS_AS(geolocate(two, fleet, model), Error);

  std::vector<LatencySample> unknown{{"mars-olympus", 0.02, 0.0}};
  CHECK_THROWS_AS(geolocate(unknown, fleet, model), Error);
}

TEST_CASE("repeated probes of one server are reduced by the median") {
  // Two clean probes plus one wild outlier per server: the median ignores the
  // outlier and the fix stays tight.
  std::vector<ServerSite> fleet = default_server_fleet();
  PropagationModel model;
  Rng rng(19);
  std::vector<LatencySample> clean =
      simulate_latency(52.52, 13.40, fleet, 0.0, 30.0, rng, model, 2);
  std::vector<LatencySample> samples = clean;
  for (const ServerSite& s : fleet) samples.push_back({s.server_id, 0.25, 99.0});
  GeoEstimate est = geolocate(samples, fleet, model);
  CHECK(great_circle_m(est.lat_deg, est.lon_deg, 52.52, 13.40) < 10000.0);
}
