#pragma once

// In-app signpost layout: one reading panel per language, mounted on a wall
// plane.  The simulator aims the headset at a panel during the signpost
// puzzle; the gaze extractor intersects the per-frame view ray with these
// rectangles to recover which language the user read.

#include <cmath>
#include <string>
#include <vector>

#include "vrinfer/io.hpp"
#include "vrinfer/types.hpp"

namespace vrinfer {

struct Panel {
  std::string language;  // ISO 639-1 code of the panel text
  Vec3 center;
  double width_m = 0.5;
  double height_m = 0.4;
  Vec3 normal{0.0, 0.0, 1.0};  // unit normal pointing into the room
};

struct PanelLayout {
  std::vector<Panel> panels;
};

inline void validate_layout(const PanelLayout& layout) {
  expect(!layout.panels.empty(), Err::InvalidConfig, "layout has no panels");
  for (const Panel& p : layout.panels) {
    expect(!p.language.empty(), Err::InvalidConfig, "panel language is empty");
    expect(p.width_m > 0.0 && p.height_m > 0.0, Err::InvalidConfig,
           "panel " + p.language + " has non-positive size");
    expect(p.normal.norm() > 1e-9, Err::InvalidConfig,
           "panel " + p.language + " has zero normal");
    for (const Panel& q : layout.panels)
      expect(&p == &q || p.language != q.language, Err::InvalidConfig,
             "duplicate panel language " + p.language);
  }
}

// Eight panels in a row on the far wall (z = -2.5), one per signpost
// language, centered at eye height.
inline PanelLayout default_panel_layout() {
  static const std::vector<std::string> langs = {"hi", "zh", "fr", "ja",
                                                 "ru", "es", "pt", "ar"};
  PanelLayout layout;
  double x = -2.1;
  for (const std::string& lang : langs) {
    Panel p;
    p.language = lang;
    p.center = {x, 1.6, -2.5};
    p.normal = {0.0, 0.0, 1.0};
    layout.panels.push_back(p);
    x += 0.6;
  }
  validate_layout(layout);
  return layout;
}

// Intersects the view ray (origin, direction) with a panel rectangle.  The
// panels are axis-aligned on constant-z planes, so the in-rectangle test is a
// simple extent check.  Returns false for rays parallel to or pointing away
// from the plane.
inline bool ray_hits_panel(const Vec3& origin, const Vec3& dir, const Panel& p) {
  double denom = dir.dot(p.normal);
  if (std::fabs(denom) < 1e-12) return false;
  double t = (p.center - origin).dot(p.normal) / denom;
  if (t <= 0.0) return false;
  Vec3 hit = origin + dir * t;
  return std::fabs(hit.x - p.center.x) <= p.width_m / 2.0 &&
         std::fabs(hit.y - p.center.y) <= p.height_m / 2.0;
}

inline json layout_to_json(const PanelLayout& layout) {
  json panels = json::array();
  for (const Panel& p : layout.panels)
    panels.push_back({{"language", p.language},
                      {"center", {p.center.x, p.center.y, p.center.z}},
                      {"width_m", p.width_m},
                      {"height_m", p.height_m},
                      {"normal", {p.normal.x, p.normal.y, p.normal.z}}});
  return json{{"version", "1"}, {"panels", panels}};
}

inline PanelLayout layout_from_json(const json& j) {
  expect(j.is_object() && j.contains("panels") && j.at("panels").is_array(),
         Err::InvalidConfig, "layout: expected object with a panels array");
  PanelLayout layout;
  for (const json& e : j.at("panels")) {
    expect(e.is_object(), Err::InvalidConfig, "layout: panel entry is not an object");
    Panel p;
    p.language = e.at("language").get<std::string>();
    const json& c = e.at("center");
    const json& n = e.at("normal");
    expect(c.is_array() && c.size() == 3 && n.is_array() && n.size() == 3,
           Err::InvalidConfig, "layout: center/normal must be 3-vectors");
    p.center = {c[0].get<double>(), c[1].get<double>(), c[2].get<double>()};
    p.normal = {n[0].get<double>(), n[1].get<double>(), n[2].get<double>()};
    p.width_m = e.at("width_m").get<double>();
    p.height_m = e.at("height_m").get<double>();
    layout.panels.push_back(p);
  }
  validate_layout(layout);
  return layout;
}

}  // namespace vrinfer
