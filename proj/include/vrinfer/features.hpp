#pragma once

// Feature vectors for the second-stage inference models.  Features are
// derived from attack *reports* (not ground truth): the profiling pipeline
// is telemetry -> recovered attributes -> demographic inference, so models
// see exactly what an attacker would.
//
// The layout is versioned; serialized models refuse feature vectors of a
// different version rather than silently misaligning columns.

#include <string>
#include <vector>

#include "vrinfer/types.hpp"

namespace vrinfer {

inline constexpr int kFeatureVersion = 1;

// Column order is the contract; append-only across versions.
inline const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = {
      "height_m",       "wingspan_m",  "ipd_m",       "reaction_time_s",
      "close_vision",   "far_vision",  "moca_total",  "fitness_low",
      "session_duration_s",
      "lang_zh",        "lang_es",     "lang_fr",     "lang_hi",
      "lang_pt",        "lang_ar",     "lang_ja",     "lang_ru",
  };
  return names;
}

inline std::size_t feature_index(const std::string& name) {
  const std::vector<std::string>& names = feature_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  fail(Err::InvalidConfig, "unknown feature '" + name + "'");
}

struct FeatureVector {
  int version = kFeatureVersion;
  std::string user_id;
  std::vector<double> values;  // size == feature_names().size()
  std::vector<bool> present;   // per-column: recovered vs missing

  FeatureVector() : values(feature_names().size(), 0.0), present(feature_names().size(), false) {}

  void set(const std::string& name, double v) {
    std::size_t i = feature_index(name);
    values[i] = v;
    present[i] = true;
  }
};

// Projects an attack report onto the feature columns.  Attributes the tier
// could not recover stay absent; models mean-impute them.
inline FeatureVector features_from_report(const AttributeReport& report) {
  FeatureVector f;
  f.user_id = report.user_id;
  auto copy_number = [&](const char* attr, const char* feat) {
    if (report.has(attr)) f.set(feat, report.at(attr).value.get<double>());
  };
  copy_number("height", "height_m");
  copy_number("wingspan", "wingspan_m");
  copy_number("ipd", "ipd_m");
  copy_number("reaction_time", "reaction_time_s");
  copy_number("moca_total", "moca_total");
  copy_number("session_duration", "session_duration_s");
  if (report.has("hyperopia"))
    f.set("close_vision", report.at("hyperopia").value.get<std::string>() == "none" ? 1.0 : 0.0);
  if (report.has("myopia"))
    f.set("far_vision", report.at("myopia").value.get<std::string>() == "none" ? 1.0 : 0.0);
  if (report.has("fitness_low"))
    f.set("fitness_low", report.at("fitness_low").value.get<bool>() ? 1.0 : 0.0);
  if (report.has("languages")) {
    static const std::vector<std::string> codes = {"zh", "es", "fr", "hi",
                                                   "pt", "ar", "ja", "ru"};
    for (const std::string& code : codes) f.set("lang_" + code, 0.0);
    for (const json& lang : report.at("languages").value) {
      std::string code = lang.get<std::string>();
      for (const std::string& known : codes)
        if (code == known) f.set("lang_" + code, 1.0);
    }
  }
  return f;
}

// Feature subsets per inference task: each model sees only the attributes
// identified as informative for it.
inline const std::vector<std::string>& task_features(const std::string& task) {
  static const std::vector<std::string> gender = {"height_m", "wingspan_m", "ipd_m"};
  static const std::vector<std::string> age = {"close_vision", "reaction_time_s", "height_m",
                                               "session_duration_s", "moca_total"};
  static const std::vector<std::string> ethnicity = {
      "lang_zh", "lang_es", "lang_fr", "lang_hi", "lang_pt",
      "lang_ar", "lang_ja", "lang_ru", "height_m"};
  static const std::vector<std::string> disability = {"close_vision", "far_vision",
                                                      "fitness_low", "moca_total"};
  static const std::vector<std::string> identity = {
      "height_m",     "wingspan_m", "moca_total",      "ipd_m",
      "close_vision", "far_vision", "reaction_time_s"};
  if (task == "gender") return gender;
  if (task == "age") return age;
  if (task == "ethnicity") return ethnicity;
  if (task == "disability") return disability;
  if (task == "identity") return identity;
  fail(Err::InvalidConfig, "unknown inference task '" + task + "'");
}

}  // namespace vrinfer
