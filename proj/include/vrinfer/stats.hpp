#pragma once

// Small order-statistics and summary helpers shared by the extractors.

#include <algorithm>
#include <cmath>
#include <vector>

#include "vrinfer/types.hpp"

namespace vrinfer {

// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value.
inline double percentile(std::vector<double> values, double p) {
  expect(!values.empty(), Err::EmptyWindow, "percentile of empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

inline double median(std::vector<double> values) {
  expect(!values.empty(), Err::EmptyWindow, "median of empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

inline double mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

inline double stddev(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

inline double round_to(double value, double step) {
  return std::round(value / step) * step;
}

}  // namespace vrinfer
