#pragma once

// Physical-environment recovery: room dimensions from the spatial extent of
// head telemetry, and coarse geolocation by multilaterating RTT-derived
// distances to known server sites.  The propagation model here is shared with
// the latency simulator so oracle and attack agree on physics.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "vrinfer/stats.hpp"
#include "vrinfer/types.hpp"

namespace vrinfer {

inline constexpr double kEarthRadiusM = 6371.0e3;
inline constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

// Great-circle distance (haversine formulation).
inline double great_circle_m(double lat1_deg, double lon1_deg, double lat2_deg,
                             double lon2_deg) {
  const double phi1 = lat1_deg * kDegToRad;
  const double phi2 = lat2_deg * kDegToRad;
  const double dphi = (lat2_deg - lat1_deg) * kDegToRad;
  const double dlam = (lon2_deg - lon1_deg) * kDegToRad;
  const double sp = std::sin(0.5 * dphi);
  const double sl = std::sin(0.5 * dlam);
  const double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

// ---------------------------------------------------------------------------
// Room dimensions
// ---------------------------------------------------------------------------

struct RoomDims {
  double length_m = 0.0;  // head X extent + clearance margin
  double width_m = 0.0;   // head Z extent + clearance margin
  double area_m2 = 0.0;   // length * width, reported at 1 m^2 precision
};

// The walkable envelope understates the walls by roughly a body clearance, so
// a fixed margin is added per axis.  p1/p99 instead of min/max resists
// tracking glitches.
inline constexpr double kRoomClearanceMarginM = 0.5;

inline RoomDims estimate_room_dims(const TelemetryTrace& trace) {
  RoomDims dims;
  double ext_x = 0.0, ext_z = 0.0;
  if (trace.frames.size() >= 2) {
    std::vector<double> xs, zs;
    xs.reserve(trace.frames.size());
    zs.reserve(trace.frames.size());
    for (const TelemetryFrame& f : trace.frames) {
      xs.push_back(f.hmd.position.x);
      zs.push_back(f.hmd.position.z);
    }
    ext_x = percentile(xs, 99.0) - percentile(xs, 1.0);
    ext_z = percentile(zs, 99.0) - percentile(zs, 1.0);
  }
  dims.length_m = ext_x + kRoomClearanceMarginM;
  dims.width_m = ext_z + kRoomClearanceMarginM;
  dims.area_m2 = std::round(dims.length_m * dims.width_m);
  return dims;
}

// ---------------------------------------------------------------------------
// Latency multilateration
// ---------------------------------------------------------------------------

inline double rtt_to_distance(const LatencySample& sample, const PropagationModel& model) {
  return std::max(0.0, 0.5 * (sample.rtt_s - model.proc_offset_s)) * model.v_eff_mps;
}

// Default matchmaking fleet probed by the app; mirrors data/servers.json.
inline std::vector<ServerSite> default_server_fleet() {
  return {
      {"eu-frankfurt", 50.1109, 8.6821},
      {"us-virginia", 38.9000, -77.0000},
      {"us-oregon", 45.5152, -122.6784},
      {"ap-tokyo", 35.6762, 139.6503},
  };
}

struct GeoEstimate {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double residual_m = 0.0;  // RMS over servers at the returned point
  bool converged = true;    // false -> refinement diverged, grid best returned
};

namespace detail {

struct GeoTarget {
  double lat_deg, lon_deg, dist_m;
};

inline double geo_objective(const std::vector<GeoTarget>& targets, double lat, double lon) {
  double ss = 0.0;
  for (const GeoTarget& t : targets) {
    double r = great_circle_m(lat, lon, t.lat_deg, t.lon_deg) - t.dist_m;
    ss += r * r;
  }
  return ss;
}

inline void wrap_lat_lon(double& lat, double& lon) {
  if (lat > 90.0) {
    lat = 180.0 - lat;
    lon += 180.0;
  } else if (lat < -90.0) {
    lat = -180.0 - lat;
    lon += 180.0;
  }
  while (lon <= -180.0) lon += 360.0;
  while (lon > 180.0) lon -= 360.0;
}

}  // namespace detail

// Minimizes sum_i (great_circle(x, s_i) - d_i)^2 over the sphere: coarse scan
// on a 5-degree grid, then damped Gauss-Newton with a numeric Jacobian.
// Multiple samples per server are collapsed to a median distance first.
inline GeoEstimate geolocate(const std::vector<LatencySample>& samples,
                             const std::vector<ServerSite>& servers,
                             const PropagationModel& model) {
  std::map<std::string, const ServerSite*> by_id;
  for (const ServerSite& s : servers) by_id[s.server_id] = &s;

  std::map<std::string, std::vector<double>> dists;
  for (const LatencySample& s : samples) {
    auto it = by_id.find(s.server_id);
    expect(it != by_id.end(), Err::InvalidConfig,
           "latency sample references unknown server '" + s.server_id + "'");
    dists[s.server_id].push_back(rtt_to_distance(s, model));
  }
  expect(dists.size() >= 3, Err::InsufficientServers,
         "need >= 3 distinct servers, got " + std::to_string(dists.size()));

  std::vector<detail::GeoTarget> targets;
  targets.reserve(dists.size());
  for (auto& [id, ds] : dists)
    targets.push_back({by_id[id]->lat_deg, by_id[id]->lon_deg, median(ds)});

  // Coarse scan over 5-degree cell centers.
  double best_lat = 0.0, best_lon = 0.0;
  double best_obj = std::numeric_limits<double>::infinity();
  for (double lat = -87.5; lat <= 87.5; lat += 5.0) {
    for (double lon = -177.5; lon <= 177.5; lon += 5.0) {
      double obj = detail::geo_objective(targets, lat, lon);
      if (obj < best_obj) {
        best_obj = obj;
        best_lat = lat;
        best_lon = lon;
      }
    }
  }

  // Damped Gauss-Newton from the grid best.  Numeric central-difference
  // Jacobian; the refinement tolerance (1e-6 rad) is far above the
  // differencing error.
  double lat = best_lat, lon = best_lon, obj = best_obj;
  double lambda = 1e-3;
  bool converged = false;
  const double kStep = 1e-5;                 // degrees, for differencing
  const double kTol = 1e-6 / kDegToRad;      // 1e-6 rad expressed in degrees
  for (int iter = 0; iter < 60 && !converged; ++iter) {
    double jtj[2][2] = {{0, 0}, {0, 0}};
    double jtr[2] = {0, 0};
    for (const detail::GeoTarget& t : targets) {
      double r = great_circle_m(lat, lon, t.lat_deg, t.lon_deg) - t.dist_m;
      double dlat = (great_circle_m(lat + kStep, lon, t.lat_deg, t.lon_deg) -
                     great_circle_m(lat - kStep, lon, t.lat_deg, t.lon_deg)) /
                    (2.0 * kStep);
      double dlon = (great_circle_m(lat, lon + kStep, t.lat_deg, t.lon_deg) -
                     great_circle_m(lat, lon - kStep, t.lat_deg, t.lon_deg)) /
                    (2.0 * kStep);
      jtj[0][0] += dlat * dlat;
      jtj[0][1] += dlat * dlon;
      jtj[1][1] += dlon * dlon;
      jtr[0] += dlat * r;
      jtr[1] += dlon * r;
    }
    jtj[1][0] = jtj[0][1];

    bool stepped = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      double a = jtj[0][0] + lambda, b = jtj[0][1];
      double c = jtj[1][0], d = jtj[1][1] + lambda;
      double det = a * d - b * c;
      if (std::abs(det) < 1e-30) {
        lambda *= 10.0;
        continue;
      }
      double step_lat = -(d * jtr[0] - b * jtr[1]) / det;
      double step_lon = -(-c * jtr[0] + a * jtr[1]) / det;
      double cand_lat = lat + step_lat, cand_lon = lon + step_lon;
      detail::wrap_lat_lon(cand_lat, cand_lon);
      double cand_obj = detail::geo_objective(targets, cand_lat, cand_lon);
      if (cand_obj <= obj) {
        if (std::abs(step_lat) < kTol && std::abs(step_lon) < kTol) converged = true;
        lat = cand_lat;
        lon = cand_lon;
        obj = cand_obj;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!stepped) break;  // stuck: damping exhausted
  }

  GeoEstimate est;
  if (!converged && obj > best_obj) {
    // Diverged: fall back to the grid best and flag it.
    est.lat_deg = best_lat;
    est.lon_deg = best_lon;
    est.residual_m = std::sqrt(best_obj / static_cast<double>(targets.size()));
    est.converged = false;
    return est;
  }
  est.lat_deg = lat;
  est.lon_deg = lon;
  est.residual_m = std::sqrt(obj / static_cast<double>(targets.size()));
  est.converged = converged;
  return est;
}

}  // namespace vrinfer
