#pragma once

// Second-stage inference models: map recovered-attribute feature vectors to
// demographics (classification/regression) and to identities (nearest
// neighbor).  Everything here is deterministic -- zero-initialized full-batch
// training, exhaustive split search -- so a fixed corpus yields a
// byte-identical model.json.

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "vrinfer/features.hpp"
#include "vrinfer/io.hpp"
#include "vrinfer/types.hpp"

namespace vrinfer {

// --- shared plumbing ---------------------------------------------------------

// Per-column statistics fit on training rows: z-scoring for distance/GD
// conditioning, column means for imputing attributes a tier failed to
// recover.  Missing values transform to z = 0, i.e. the column mean.
struct FeatureScaler {
  std::vector<double> mean, sd;

  static FeatureScaler fit(const std::vector<FeatureVector>& rows,
                           const std::vector<std::size_t>& cols) {
    FeatureScaler s;
    for (std::size_t c : cols) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const FeatureVector& r : rows)
        if (r.present[c]) { sum += r.values[c]; ++n; }
      double m = n ? sum / n : 0.0;
      double ss = 0.0;
      for (const FeatureVector& r : rows)
        if (r.present[c]) ss += (r.values[c] - m) * (r.values[c] - m);
      double var = n > 1 ? ss / (n - 1) : 0.0;
      s.mean.push_back(m);
      s.sd.push_back(var > 1e-18 ? std::sqrt(var) : 1.0);
    }
    return s;
  }

  std::vector<double> transform(const FeatureVector& f,
                                const std::vector<std::size_t>& cols) const {
    std::vector<double> z(cols.size(), 0.0);
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (f.present[cols[j]]) z[j] = (f.values[cols[j]] - mean[j]) / sd[j];
    return z;
  }
};

namespace detail {

inline std::vector<std::size_t> column_indices(const std::string& task) {
  std::vector<std::size_t> idx;
  for (const std::string& name : task_features(task)) idx.push_back(feature_index(name));
  return idx;
}

inline void check_version(int got) {
  expect(got == kFeatureVersion, Err::FeatureVersionMismatch,
         "feature vector v" + std::to_string(got) + ", model expects v" +
             std::to_string(kFeatureVersion));
}

inline double sigmoid(double z) {
  if (z > 35.0) return 1.0;
  if (z < -35.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-z));
}

inline std::vector<std::string> sorted_users(const std::vector<FeatureVector>& rows) {
  std::vector<std::string> users;
  for (const FeatureVector& r : rows) users.push_back(r.user_id);
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  return users;
}

inline json scaler_to_json(const FeatureScaler& s) {
  return json{{"mean", s.mean}, {"sd", s.sd}};
}

inline FeatureScaler scaler_from_json(const json& j) {
  FeatureScaler s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.sd = j.at("sd").get<std::vector<double>>();
  expect(s.mean.size() == s.sd.size(), Err::MalformedJson, "scaler mean/sd size mismatch");
  return s;
}

}  // namespace detail

// Guard used by every model: refuses to score a user the model was fit on.
// Keeps train/test hygiene a runtime invariant rather than a convention.
inline void ensure_not_trained_on(const std::vector<std::string>& trained_users,
                                  const std::string& user_id) {
  expect(!std::binary_search(trained_users.begin(), trained_users.end(), user_id),
         Err::InvalidConfig, "user " + user_id + " was in the training set");
}

// --- one-vs-rest logistic classifier -------------------------------------------

struct LogisticModel {
  std::string task;
  int feature_version = kFeatureVersion;
  std::vector<std::string> classes;                // sorted
  FeatureScaler scaler;
  std::vector<std::vector<double>> weights;        // [class][dim+1], bias last
  std::vector<std::string> trained_users;          // sorted

  static LogisticModel train(const std::string& task, const std::vector<FeatureVector>& rows,
                             const std::vector<std::string>& labels, int epochs = 300,
                             double lr = 0.1, double l2 = 1e-3) {
    expect(rows.size() == labels.size(), Err::InvalidConfig, "rows/labels size mismatch");
    expect(rows.size() >= 6, Err::TooFewExamples,
           "need >= 6 training rows, got " + std::to_string(rows.size()));
    for (const FeatureVector& r : rows) detail::check_version(r.version);

    LogisticModel m;
    m.task = task;
    const std::vector<std::size_t> cols = detail::column_indices(task);
    m.scaler = FeatureScaler::fit(rows, cols);
    std::set<std::string> uniq(labels.begin(), labels.end());
    expect(uniq.size() >= 2, Err::DegenerateLabels, "training labels are all '" +
                                                        *uniq.begin() + "'");
    m.classes.assign(uniq.begin(), uniq.end());
    m.trained_users = detail::sorted_users(rows);

    std::vector<std::vector<double>> X;
    for (const FeatureVector& r : rows) X.push_back(m.scaler.transform(r, cols));
    const std::size_t n = X.size(), d = cols.size();

    for (const std::string& cls : m.classes) {
      std::vector<double> w(d + 1, 0.0);
      for (int e = 0; e < epochs; ++e) {
        std::vector<double> grad(d + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          double z = w[d];
          for (std::size_t j = 0; j < d; ++j) z += w[j] * X[i][j];
          double err = detail::sigmoid(z) - (labels[i] == cls ? 1.0 : 0.0);
          for (std::size_t j = 0; j < d; ++j) grad[j] += err * X[i][j];
          grad[d] += err;
        }
        for (std::size_t j = 0; j < d; ++j)
          w[j] -= lr * (grad[j] / n + l2 * w[j]);  // bias is not regularized
        w[d] -= lr * grad[d] / n;
      }
      m.weights.push_back(w);
    }
    return m;
  }

  std::string predict(const FeatureVector& f) const {
    detail::check_version(f.version);
    const std::vector<std::size_t> cols = detail::column_indices(task);
    std::vector<double> x = scaler.transform(f, cols);
    std::size_t best = 0;
    double best_z = -1e300;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      double z = weights[c].back();
      for (std::size_t j = 0; j < x.size(); ++j) z += weights[c][j] * x[j];
      if (z > best_z) { best_z = z; best = c; }
    }
    return classes[best];
  }

  json to_json() const {
    return json{{"type", "logistic_ovr"},
                {"task", task},
                {"feature_version", feature_version},
                {"classes", classes},
                {"scaler", detail::scaler_to_json(scaler)},
                {"weights", weights},
                {"trained_users", trained_users}};
  }

  static LogisticModel from_json(const json& j) {
    expect(j.at("type") == "logistic_ovr", Err::MalformedJson, "not a logistic_ovr model");
    LogisticModel m;
    m.task = j.at("task").get<std::string>();
    m.feature_version = j.at("feature_version").get<int>();
    detail::check_version(m.feature_version);
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.scaler = detail::scaler_from_json(j.at("scaler"));
    m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    m.trained_users = j.at("trained_users").get<std::vector<std::string>>();
    expect(m.weights.size() == m.classes.size(), Err::MalformedJson,
           "weights/classes size mismatch");
    return m;
  }
};

// --- depth-limited regression tree ----------------------------------------------

struct TreeNode {
  int feature = -1;  // column offset within the task's feature list; -1 = leaf
  double threshold = 0.0;
  int left = -1, right = -1;
  double value = 0.0;  // leaf prediction
};

struct RegressionTreeModel {
  std::string task;
  int feature_version = kFeatureVersion;
  FeatureScaler scaler;  // means double as imputation values
  std::vector<TreeNode> nodes;
  std::vector<std::string> trained_users;
  int max_depth = 4;
  int min_leaf = 3;

  static RegressionTreeModel train(const std::string& task,
                                   const std::vector<FeatureVector>& rows,
                                   const std::vector<double>& targets, int max_depth = 4,
                                   int min_leaf = 3) {
    expect(rows.size() == targets.size(), Err::InvalidConfig, "rows/targets size mismatch");
    expect(rows.size() >= static_cast<std::size_t>(2 * min_leaf), Err::TooFewExamples,
           "need >= " + std::to_string(2 * min_leaf) + " training rows");
    for (const FeatureVector& r : rows) detail::check_version(r.version);

    RegressionTreeModel m;
    m.task = task;
    m.max_depth = max_depth;
    m.min_leaf = min_leaf;
    const std::vector<std::size_t> cols = detail::column_indices(task);
    m.scaler = FeatureScaler::fit(rows, cols);
    m.trained_users = detail::sorted_users(rows);

    // Imputed raw design matrix (trees do not need z-scores).
    std::vector<std::vector<double>> X;
    for (const FeatureVector& r : rows) {
      std::vector<double> x;
      for (std::size_t j = 0; j < cols.size(); ++j)
        x.push_back(r.present[cols[j]] ? r.values[cols[j]] : m.scaler.mean[j]);
      X.push_back(x);
    }
    std::vector<std::size_t> all(rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    m.grow(X, targets, all, 0);
    return m;
  }

  double predict(const FeatureVector& f) const {
    detail::check_version(f.version);
    const std::vector<std::size_t> cols = detail::column_indices(task);
    std::vector<double> x;
    for (std::size_t j = 0; j < cols.size(); ++j)
      x.push_back(f.present[cols[j]] ? f.values[cols[j]] : scaler.mean[j]);
    int at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
      const TreeNode& nd = nodes[static_cast<std::size_t>(at)];
      at = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(at)].value;
  }

  json to_json() const {
    json ns = json::array();
    for (const TreeNode& n : nodes)
      ns.push_back({{"feature", n.feature},
                    {"threshold", n.threshold},
                    {"left", n.left},
                    {"right", n.right},
                    {"value", n.value}});
    return json{{"type", "regression_tree"},
                {"task", task},
                {"feature_version", feature_version},
                {"scaler", detail::scaler_to_json(scaler)},
                {"max_depth", max_depth},
                {"min_leaf", min_leaf},
                {"nodes", ns},
                {"trained_users", trained_users}};
  }

  static RegressionTreeModel from_json(const json& j) {
    expect(j.at("type") == "regression_tree", Err::MalformedJson, "not a regression_tree model");
    RegressionTreeModel m;
    m.task = j.at("task").get<std::string>();
    m.feature_version = j.at("feature_version").get<int>();
    detail::check_version(m.feature_version);
    m.scaler = detail::scaler_from_json(j.at("scaler"));
    m.max_depth = j.at("max_depth").get<int>();
    m.min_leaf = j.at("min_leaf").get<int>();
    for (const json& n : j.at("nodes")) {
      TreeNode nd;
      nd.feature = n.at("feature").get<int>();
      nd.threshold = n.at("threshold").get<double>();
      nd.left = n.at("left").get<int>();
      nd.right = n.at("right").get<int>();
      nd.value = n.at("value").get<double>();
      m.nodes.push_back(nd);
    }
    m.trained_users = j.at("trained_users").get<std::vector<std::string>>();
    expect(!m.nodes.empty(), Err::MalformedJson, "tree has no nodes");
    return m;
  }

 private:
  // Grows the subtree over `idx`, returns its node id.  Best split by SSE
  // reduction; ties resolve to the lowest column then lowest threshold, so
  // training is order-independent and deterministic.
  int grow(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
           const std::vector<std::size_t>& idx, int depth) {
    double sum = 0.0;
    for (std::size_t i : idx) sum += y[i];
    const double mean = sum / idx.size();
    double sse = 0.0;
    for (std::size_t i : idx) sse += (y[i] - mean) * (y[i] - mean);

    const int id = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{});
    nodes[static_cast<std::size_t>(id)].value = mean;
    if (depth >= max_depth || idx.size() < static_cast<std::size_t>(2 * min_leaf) ||
        sse <= 1e-12)
      return id;

    int best_col = -1;
    double best_thr = 0.0, best_gain = 1e-12;
    for (std::size_t c = 0; c < X[0].size(); ++c) {
      std::vector<std::size_t> order(idx);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return X[a][c] < X[b][c];
      });
      // Prefix sums over the sorted order give each candidate split in O(1).
      double lsum = 0.0, lsq = 0.0, rsum = 0.0, rsq = 0.0;
      for (std::size_t i : order) { rsum += y[i]; rsq += y[i] * y[i]; }
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        double v = y[order[k]];
        lsum += v; lsq += v * v;
        rsum -= v; rsq -= v * v;
        if (X[order[k]][c] == X[order[k + 1]][c]) continue;  // not a boundary
        std::size_t nl = k + 1, nr = order.size() - nl;
        if (nl < static_cast<std::size_t>(min_leaf) || nr < static_cast<std::size_t>(min_leaf))
          continue;
        double child_sse = (lsq - lsum * lsum / nl) + (rsq - rsum * rsum / nr);
        double gain = sse - child_sse;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best_col = static_cast<int>(c);
          best_thr = (X[order[k]][c] + X[order[k + 1]][c]) / 2.0;
        }
      }
    }
    if (best_col < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx)
      (X[i][static_cast<std::size_t>(best_col)] <= best_thr ? left : right).push_back(i);
    nodes[static_cast<std::size_t>(id)].feature = best_col;
    nodes[static_cast<std::size_t>(id)].threshold = best_thr;
    const int l = grow(X, y, left, depth + 1);
    nodes[static_cast<std::size_t>(id)].left = l;
    const int r = grow(X, y, right, depth + 1);
    nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  }
};

// --- identity nearest-neighbor index ----------------------------------------------

struct NnMatch {
  std::string user_id;
  double distance = 0.0;         // to the matched point (z-scored space)
  double second_distance = 0.0;  // to the best *other* user, for margin checks
};

struct NnIndexModel {
  std::string task = "identity";
  int feature_version = kFeatureVersion;
  FeatureScaler scaler;
  std::vector<std::string> user_ids;
  std::vector<std::vector<double>> points;  // z-scored enrollment vectors

  static NnIndexModel build(const std::vector<FeatureVector>& rows) {
    expect(!rows.empty(), Err::EmptyIndex, "cannot build an index from zero rows");
    for (const FeatureVector& r : rows) detail::check_version(r.version);
    NnIndexModel m;
    const std::vector<std::size_t> cols = detail::column_indices(m.task);
    m.scaler = FeatureScaler::fit(rows, cols);
    for (const FeatureVector& r : rows) {
      for (const std::string& existing : m.user_ids)
        expect(existing != r.user_id, Err::InvalidConfig,
               "duplicate enrollment for " + r.user_id);
      m.user_ids.push_back(r.user_id);
      m.points.push_back(m.scaler.transform(r, cols));
    }
    return m;
  }

  // Re-identification probe.  The probe must carry every identity feature:
  // matching a half-empty vector against mean-imputed zeros says nothing.
  NnMatch query(const FeatureVector& f) const {
    expect(!points.empty(), Err::EmptyIndex, "index is empty");
    detail::check_version(f.version);
    const std::vector<std::size_t> cols = detail::column_indices(task);
    for (std::size_t c : cols)
      expect(f.present[c], Err::IncompleteProbe,
             "probe is missing feature '" + feature_names()[c] + "'");
    std::vector<double> x = scaler.transform(f, cols);
    NnMatch match;
    double best = 1e300, second = 1e300;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j)
        d2 += (x[j] - points[i][j]) * (x[j] - points[i][j]);
      if (d2 < best) { second = best; best = d2; best_i = i; }
      else if (d2 < second) second = d2;
    }
    match.user_id = user_ids[best_i];
    match.distance = std::sqrt(best);
    match.second_distance = points.size() > 1 ? std::sqrt(second) : 0.0;
    return match;
  }

  // Smallest distance between two enrolled users; probes closer than half of
  // this to their own enrollment are guaranteed to re-identify correctly.
  double min_pairwise_distance() const {
    expect(points.size() >= 2, Err::EmptyIndex, "need >= 2 enrolled users");
    double best = 1e300;
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < points[i].size(); ++k)
          d2 += (points[i][k] - points[j][k]) * (points[i][k] - points[j][k]);
        best = std::min(best, d2);
      }
    return std::sqrt(best);
  }

  json to_json() const {
    return json{{"type", "nn_index"},
                {"task", task},
                {"feature_version", feature_version},
                {"scaler", detail::scaler_to_json(scaler)},
                {"user_ids", user_ids},
                {"points", points}};
  }

  static NnIndexModel from_json(const json& j) {
    expect(j.at("type") == "nn_index", Err::MalformedJson, "not an nn_index model");
    NnIndexModel m;
    m.task = j.at("task").get<std::string>();
    m.feature_version = j.at("feature_version").get<int>();
    detail::check_version(m.feature_version);
    m.scaler = detail::scaler_from_json(j.at("scaler"));
    m.user_ids = j.at("user_ids").get<std::vector<std::string>>();
    m.points = j.at("points").get<std::vector<std::vector<double>>>();
    expect(m.user_ids.size() == m.points.size(), Err::MalformedJson,
           "user_ids/points size mismatch");
    return m;
  }
};

}  // namespace vrinfer
