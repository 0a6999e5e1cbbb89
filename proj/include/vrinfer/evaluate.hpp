#pragma once

// Evaluation harness: scores attack reports against ground-truth profiles.
// Produces flat metric rows (attribute, metric, value, n) so downstream
// tooling can diff accuracy across runs, tiers, and defense settings.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "vrinfer/attacks.hpp"
#include "vrinfer/behavior.hpp"
#include "vrinfer/env.hpp"
#include "vrinfer/features.hpp"
#include "vrinfer/models.hpp"
#include "vrinfer/rng.hpp"
#include "vrinfer/stats.hpp"
#include "vrinfer/types.hpp"

namespace vrinfer {

struct MetricRow {
  std::string attribute;
  std::string metric;
  double value = 0.0;
  std::size_t n = 0;  // pairs the metric was computed over
};

struct AccuracyReport {
  std::vector<MetricRow> rows;

  const MetricRow* find(const std::string& attribute, const std::string& metric) const {
    for (const MetricRow& r : rows)
      if (r.attribute == attribute && r.metric == metric) return &r;
    return nullptr;
  }
  double value_or(const std::string& attribute, const std::string& metric,
                  double fallback) const {
    const MetricRow* r = find(attribute, metric);
    return r ? r->value : fallback;
  }
};

using EvalPair = std::pair<UserProfile, AttributeReport>;

// Ground-truth derivations shared with the tests.
inline std::string truth_longer_arm(const UserProfile& p) {
  double d = p.arm_left_m - p.arm_right_m;
  if (std::fabs(d) < kArmSameBandM) return "same";
  return d > 0.0 ? "left" : "right";
}

namespace detail {

// Accumulates one tolerance/equality metric over all pairs where the report
// carries the attribute.
template <typename Fn>
inline void add_share(AccuracyReport& out, const std::vector<EvalPair>& pairs,
                      const std::string& attribute, const std::string& metric, Fn&& hit) {
  std::size_t n = 0, good = 0;
  for (const EvalPair& pr : pairs) {
    if (!pr.second.has(attribute)) continue;
    ++n;
    if (hit(pr.first, pr.second.at(attribute).value)) ++good;
  }
  out.rows.push_back({attribute, metric, n ? static_cast<double>(good) / n : 0.0, n});
}

template <typename Fn>
inline void add_mean(AccuracyReport& out, const std::vector<EvalPair>& pairs,
                     const std::string& attribute, const std::string& metric, Fn&& err) {
  std::size_t n = 0;
  double sum = 0.0;
  for (const EvalPair& pr : pairs) {
    if (!pr.second.has(attribute)) continue;
    ++n;
    sum += err(pr.first, pr.second.at(attribute).value);
  }
  out.rows.push_back({attribute, metric, n ? sum / n : 0.0, n});
}

}  // namespace detail

// --- direct attribute scoring -------------------------------------------------

inline AccuracyReport evaluate_attributes(const std::vector<EvalPair>& pairs) {
  AccuracyReport out;
  for (const EvalPair& pr : pairs)
    expect(pr.first.user_id == pr.second.user_id, Err::InvalidConfig,
           "profile/report user mismatch: " + pr.first.user_id + " vs " +
               pr.second.user_id);

  auto num = [](const json& v) { return v.get<double>(); };

  detail::add_share(out, pairs, "height", "within_5cm", [&](const UserProfile& p, const json& v) {
    return std::fabs(num(v) - p.height_m) <= 0.05 + 1e-12;
  });
  detail::add_share(out, pairs, "height", "within_7cm", [&](const UserProfile& p, const json& v) {
    return std::fabs(num(v) - p.height_m) <= 0.07 + 1e-12;
  });
  detail::add_mean(out, pairs, "height", "mae_m", [&](const UserProfile& p, const json& v) {
    return std::fabs(num(v) - p.height_m);
  });

  detail::add_share(out, pairs, "wingspan", "within_7cm", [&](const UserProfile& p, const json& v) {
    return std::fabs(num(v) - p.wingspan_m) <= 0.07 + 1e-12;
  });
  detail::add_share(out, pairs, "wingspan", "within_12cm", [&](const UserProfile& p, const json& v) {
    return std::fabs(num(v) - p.wingspan_m) <= 0.12 + 1e-12;
  });
  detail::add_mean(out, pairs, "wingspan", "mae_m", [&](const UserProfile& p, const json& v) {
    return std::fabs(num(v) - p.wingspan_m);
  });

  detail::add_share(out, pairs, "longer_arm", "accuracy", [&](const UserProfile& p, const json& v) {
    return v.get<std::string>() == truth_longer_arm(p);
  });
  {  // subpopulations with real asymmetry
    for (double band : {0.02, 0.03}) {
      std::size_t n = 0, good = 0;
      for (const EvalPair& pr : pairs) {
        if (!pr.second.has("longer_arm")) continue;
        if (std::fabs(pr.first.arm_left_m - pr.first.arm_right_m) < band - 1e-12) continue;
        ++n;
        if (pr.second.at("longer_arm").value.get<std::string>() == truth_longer_arm(pr.first))
          ++good;
      }
      char name[32];
      std::snprintf(name, sizeof name, "accuracy_ge_%.0fcm", band * 100.0);
      out.rows.push_back({"longer_arm", name, n ? static_cast<double>(good) / n : 0.0, n});
    }
  }

  detail::add_share(out, pairs, "handedness", "accuracy", [&](const UserProfile& p, const json& v) {
    return v.get<std::string>() == to_string(p.handedness);
  });

  detail::add_share(out, pairs, "ipd", "within_0.5mm", [&](const UserProfile& p, const json& v) {
    return std::fabs(num(v) - p.ipd_m) <= 0.0005 + 1e-12;
  });

  detail::add_share(out, pairs, "fitness_low", "accuracy", [&](const UserProfile& p, const json& v) {
    return v.get<bool>() == (p.fitness == Fitness::Low);
  });
  {  // F1 on the low class
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const EvalPair& pr : pairs) {
      if (!pr.second.has("fitness_low")) continue;
      bool pred = pr.second.at("fitness_low").value.get<bool>();
      bool truth = pr.first.fitness == Fitness::Low;
      tp += pred && truth;
      fp += pred && !truth;
      fn += !pred && truth;
    }
    double f1 = (2.0 * tp + fp + fn) > 0 ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
    out.rows.push_back({"fitness_low", "f1_low", f1, tp + fp + fn});
  }

  detail::add_share(out, pairs, "reaction_time", "within_tick",
                    [&](const UserProfile& p, const json& v) {
                      return std::fabs(num(v) - p.reaction_time_s) <= kReactionTickS / 2.0;
                    });
  detail::add_mean(out, pairs, "reaction_time", "mae_s", [&](const UserProfile& p, const json& v) {
    return std::fabs(num(v) - p.reaction_time_s);
  });

  detail::add_share(out, pairs, "room_area", "within_2m2", [&](const UserProfile& p, const json& v) {
    return std::fabs(num(v) - p.room_length_m * p.room_width_m) <= 2.0 + 1e-12;
  });
  detail::add_share(out, pairs, "room_area", "within_3m2", [&](const UserProfile& p, const json& v) {
    return std::fabs(num(v) - p.room_length_m * p.room_width_m) <= 3.0 + 1e-12;
  });

  {  // geolocation: distance between estimate and truth
    std::vector<double> dists_km;
    std::size_t good = 0;
    for (const EvalPair& pr : pairs) {
      if (!pr.second.has("geo_lat") || !pr.second.has("geo_lon")) continue;
      double km = great_circle_m(pr.second.at("geo_lat").value.get<double>(),
                                 pr.second.at("geo_lon").value.get<double>(),
                                 pr.first.lat_deg, pr.first.lon_deg) / 1000.0;
      dists_km.push_back(km);
      if (km <= 500.0) ++good;
    }
    std::size_t n = dists_km.size();
    out.rows.push_back({"geolocation", "within_500km", n ? static_cast<double>(good) / n : 0.0, n});
    out.rows.push_back({"geolocation", "median_km", n ? median(dists_km) : 0.0, n});
  }

  detail::add_share(out, pairs, "tracking_rate", "within_2.5hz",
                    [&](const UserProfile& p, const json& v) {
                      return std::fabs(num(v) - p.device.tracking_rate_hz) <= 2.5;
                    });
  detail::add_share(out, pairs, "refresh_rate", "within_3hz",
                    [&](const UserProfile& p, const json& v) {
                      return std::fabs(num(v) - p.device.hmd_refresh_hz) <= 3.0;
                    });
  detail::add_share(out, pairs, "refresh_band", "contains_truth",
                    [&](const UserProfile& p, const json& v) {
                      double lo = v.at("lo").get<double>();
                      double hi = v.at("hi").is_null() ? std::numeric_limits<double>::infinity()
                                                       : v.at("hi").get<double>();
                      return p.device.hmd_refresh_hz >= lo && p.device.hmd_refresh_hz < hi;
                    });
  detail::add_share(out, pairs, "device_model", "accuracy",
                    [&](const UserProfile& p, const json& v) {
                      return v.get<std::string>() == p.device.model;
                    });
  detail::add_share(out, pairs, "host_tier", "accuracy", [&](const UserProfile& p, const json& v) {
    return v.get<std::string>() == to_string(host_tier(p.host_cpu_ghz, p.host_gpu_mhs));
  });

  detail::add_share(out, pairs, "moca_total", "exact", [&](const UserProfile& p, const json& v) {
    return v.get<int>() == moca_total_from_counts(p.moca_answers);
  });
  detail::add_share(out, pairs, "moca_total", "within_1", [&](const UserProfile& p, const json& v) {
    return std::abs(v.get<int>() - moca_total_from_counts(p.moca_answers)) <= 1;
  });
  detail::add_share(out, pairs, "moca_pass", "accuracy", [&](const UserProfile& p, const json& v) {
    return v.get<bool>() == (moca_total_from_counts(p.moca_answers) > 26);
  });

  detail::add_share(out, pairs, "colorblind", "accuracy", [&](const UserProfile& p, const json& v) {
    return v.get<bool>() == p.colorblind;
  });
  detail::add_share(out, pairs, "hyperopia", "accuracy", [&](const UserProfile& p, const json& v) {
    return v.get<std::string>() == to_string(p.hyperopia);
  });
  detail::add_share(out, pairs, "myopia", "accuracy", [&](const UserProfile& p, const json& v) {
    return v.get<std::string>() == to_string(p.myopia);
  });

  {  // language detection, over users who actually know one
    std::size_t n = 0, good = 0;
    for (const EvalPair& pr : pairs) {
      if (pr.first.languages.empty() || !pr.second.has("languages")) continue;
      ++n;
      const json& detected = pr.second.at("languages").value;
      if (!detected.empty()) {
        std::string first = detected[0].get<std::string>();
        for (const std::string& truth : pr.first.languages)
          if (truth == first) { ++good; break; }
      }
    }
    out.rows.push_back({"languages", "known_language_detected",
                        n ? static_cast<double>(good) / n : 0.0, n});
  }

  return out;
}

// --- cross-session re-identification ---------------------------------------------

// Enrolls session-A reports in a nearest-neighbor index and probes with
// session-B reports of the same population.
inline AccuracyReport evaluate_identity(const std::vector<AttributeReport>& enroll,
                                        const std::vector<AttributeReport>& probe) {
  std::vector<FeatureVector> rows;
  for (const AttributeReport& r : enroll) rows.push_back(features_from_report(r));
  NnIndexModel index = NnIndexModel::build(rows);
  std::size_t n = 0, good = 0;
  for (const AttributeReport& r : probe) {
    NnMatch m = index.query(features_from_report(r));
    ++n;
    if (m.user_id == r.user_id) ++good;
  }
  AccuracyReport out;
  out.rows.push_back({"identity", "reidentification", n ? static_cast<double>(good) / n : 0.0, n});
  return out;
}

// --- demographic inference (cross-validated) ----------------------------------------

// K-fold cross-validation over *users*: every prediction comes from a model
// whose training set provably excludes that user (the models enforce it at
// runtime, not just here).
inline AccuracyReport evaluate_inference(const std::vector<EvalPair>& pairs, int n_folds = 5,
                                         std::uint64_t seed = 1) {
  expect(n_folds >= 2, Err::InvalidConfig, "need >= 2 folds");
  expect(pairs.size() >= static_cast<std::size_t>(2 * n_folds), Err::TooFewExamples,
         "too few users for " + std::to_string(n_folds) + "-fold CV");

  // Deterministic shuffled fold assignment.
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0xf01d));
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);

  std::size_t gender_ok = 0, gender_n = 0;
  std::size_t eth_ok = 0, eth_n = 0;
  std::size_t dis_ok = 0, dis_n = 0;
  double age_abs = 0.0;
  std::size_t age_n = 0;

  for (int fold = 0; fold < n_folds; ++fold) {
    std::vector<FeatureVector> train_rows;
    std::vector<std::string> gender_y, eth_y, dis_y;
    std::vector<double> age_y;
    std::vector<std::size_t> test_idx;
    for (std::size_t k = 0; k < order.size(); ++k) {
      std::size_t i = order[k];
      if (static_cast<int>(k % n_folds) == fold) {
        test_idx.push_back(i);
        continue;
      }
      train_rows.push_back(features_from_report(pairs[i].second));
      gender_y.push_back(to_string(pairs[i].first.gender));
      eth_y.push_back(pairs[i].first.ethnicity);
      dis_y.push_back(to_string(pairs[i].first.disability));
      age_y.push_back(static_cast<double>(pairs[i].first.age_years));
    }
    LogisticModel gender = LogisticModel::train("gender", train_rows, gender_y);
    LogisticModel ethnicity = LogisticModel::train("ethnicity", train_rows, eth_y);
    LogisticModel disability = LogisticModel::train("disability", train_rows, dis_y);
    RegressionTreeModel age = RegressionTreeModel::train("age", train_rows, age_y);

    for (std::size_t i : test_idx) {
      FeatureVector f = features_from_report(pairs[i].second);
      ensure_not_trained_on(gender.trained_users, f.user_id);
      ++gender_n;
      if (gender.predict(f) == to_string(pairs[i].first.gender)) ++gender_ok;
      ++eth_n;
      if (ethnicity.predict(f) == pairs[i].first.ethnicity) ++eth_ok;
      ++dis_n;
      if (disability.predict(f) == to_string(pairs[i].first.disability)) ++dis_ok;
      ++age_n;
      age_abs += std::fabs(age.predict(f) - pairs[i].first.age_years);
    }
  }

  AccuracyReport out;
  out.rows.push_back({"gender", "cv_accuracy",
                      gender_n ? static_cast<double>(gender_ok) / gender_n : 0.0, gender_n});
  out.rows.push_back({"ethnicity", "cv_accuracy",
                      eth_n ? static_cast<double>(eth_ok) / eth_n : 0.0, eth_n});
  out.rows.push_back({"disability", "cv_accuracy",
                      dis_n ? static_cast<double>(dis_ok) / dis_n : 0.0, dis_n});
  out.rows.push_back({"age", "cv_mae_years", age_n ? age_abs / age_n : 0.0, age_n});
  return out;
}

// --- capability audit ----------------------------------------------------------------

// One row per tier: count of attributes present that the tier should not
// have.  All-zero is the pass condition.
inline AccuracyReport evaluate_audit(const std::vector<AttributeReport>& reports) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_tier;  // leaks, reports
  for (const AttributeReport& r : reports) {
    auto& [leaks, count] = per_tier[to_string(r.tier)];
    leaks += audit_report(r).size();
    ++count;
  }
  AccuracyReport out;
  for (const auto& [tier, lc] : per_tier)
    out.rows.push_back({"audit_" + tier, "capability_leaks", static_cast<double>(lc.first),
                        lc.second});
  return out;
}

inline json accuracy_to_json(const AccuracyReport& report) {
  json rows = json::array();
  for (const MetricRow& r : report.rows)
    rows.push_back({{"attribute", r.attribute},
                    {"metric", r.metric},
                    {"value", r.value},
                    {"n", r.n}});
  return json{{"version", "1"}, {"rows", rows}};
}

inline void merge_into(AccuracyReport& dst, const AccuracyReport& src) {
  dst.rows.insert(dst.rows.end(), src.rows.begin(), src.rows.end());
}

}  // namespace vrinfer
