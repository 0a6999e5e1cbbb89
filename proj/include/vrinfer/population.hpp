#pragma once

// Synthetic population sampler.  Marginals are calibrated against the study
// cohort's reported distributions (height bins 36/32/32%, 94% right-handed,
// device share 52/42/6%, 86% cognitive-test pass rate, ...); correlated
// structure (gender vs height/wingspan/IPD, ethnicity vs languagesknown,
// mental disability vs test scores) is what the inference models learn from.
//
// Ground truth that the extractors recover through instruments with finite
// reporting precision is sampled on the matching grid (height/wingspan 1 cm,
// arms 1 mm, IPD 0.1 mm, reaction time 1/60 s) so the noiseless round trip
// is exact rather than within-half-a-tick.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "vrinfer/device.hpp"
#include "vrinfer/rng.hpp"
#include "vrinfer/stats.hpp"
#include "vrinfer/types.hpp"

namespace vrinfer {

namespace popconst {

// Gender-conditioned body mixture.
inline constexpr double kMaleShare = 0.52;
inline constexpr double kHeightMeanMale = 1.77, kHeightSigmaMale = 0.070;
inline constexpr double kHeightMeanFemale = 1.625, kHeightSigmaFemale = 0.065;
inline constexpr double kHeightLo = 1.50, kHeightHi = 1.89;
// Arm-span/height ratio is sexually dimorphic: span exceeds height by ~5 cm
// in men but roughly matches it in women.
inline constexpr double kWingRatioMeanMale = 1.030, kWingRatioMeanFemale = 1.000;
inline constexpr double kWingRatioSigma = 0.018;
inline constexpr double kIpdMeanMaleM = 0.0642, kIpdMeanFemaleM = 0.0612;
inline constexpr double kIpdSigmaM = 0.0015;
// Shoulder span as a fraction of wingspan; arms fill the rest.
inline constexpr double kShoulderFraction = 0.16;

// Arm asymmetry: 12% effectively symmetric (<1 cm), 52% left-dominant,
// 36% right-dominant; of the asymmetric users, 13.6% differ by >= 3 cm.
inline constexpr double kArmSameShare = 0.12, kArmLeftShare = 0.52;
inline constexpr double kArmBigDeltaShare = 0.136;

inline constexpr double kRightHandedShare = 0.94;
inline constexpr double kColorblindShare = 0.04;

// Reaction time drifts mildly with age; the marginal puts ~54% above 250 ms.
inline constexpr double kReactionBase = 0.264, kReactionAgeSlope = 0.0006;
inline constexpr double kReactionSigma = 0.055;

inline constexpr double kMentalShare = 0.06, kPhysicalShare = 0.02;
// Non-disability-driven cognitive impairment rate; combined fail rate 14%.
inline constexpr double kIdiopathicImpairedShare = 0.085;

}  // namespace popconst

namespace detail {

struct SiteRow {
  double lat, lon, weight;
};

// Study lab locations (users cluster around a handful of metros).
inline const std::vector<SiteRow>& lab_sites() {
  static const std::vector<SiteRow> sites = {
      {37.8716, -122.2727, 46.0},  // Berkeley
      {48.1374, 11.5755, 40.0},    // Munich
      {40.7128, -74.0060, 8.0},    // New York
      {1.3521, 103.8198, 6.0},     // Singapore
  };
  return sites;
}

struct LangProb {
  const char* code;
  double p;
};

// Language knowledge conditioned on ethnicity; marginals approximate the
// cohort's language table while keeping the correlation the ethnicity
// classifier relies on.
inline const std::vector<LangProb>& language_probs(const std::string& ethnicity) {
  static const std::vector<LangProb> asian = {
      {"zh", 0.70}, {"es", 0.14}, {"fr", 0.12}, {"hi", 0.25}, {"pt", 0.0}, {"ar", 0.02}};
  static const std::vector<LangProb> white = {
      {"zh", 0.04}, {"es", 0.45}, {"fr", 0.60}, {"hi", 0.0}, {"pt", 0.08}, {"ar", 0.04}};
  static const std::vector<LangProb> black = {
      {"zh", 0.0}, {"es", 0.35}, {"fr", 0.65}, {"hi", 0.0}, {"pt", 0.18}, {"ar", 0.18}};
  static const std::vector<LangProb> hispanic = {
      {"zh", 0.0}, {"es", 1.0}, {"fr", 0.18}, {"hi", 0.0}, {"pt", 0.32}, {"ar", 0.0}};
  if (ethnicity == "asian") return asian;
  if (ethnicity == "white") return white;
  if (ethnicity == "black") return black;
  return hispanic;
}

inline double snap(Rng& rng, double mean, double sigma, double lo, double hi, double grid) {
  return round_to(rng.normal_trunc(mean, sigma, lo, hi), grid);
}

}  // namespace detail

inline UserProfile sample_profile(std::uint64_t user_seed, const std::string& user_id) {
  using namespace popconst;
  Rng rng(user_seed);
  UserProfile p;
  p.user_id = user_id;

  // Body.
  p.gender = rng.bernoulli(kMaleShare) ? Gender::Male : Gender::Female;
  const bool male = p.gender == Gender::Male;
  p.height_m = detail::snap(rng, male ? kHeightMeanMale : kHeightMeanFemale,
                            male ? kHeightSigmaMale : kHeightSigmaFemale, kHeightLo,
                            kHeightHi, 0.01);
  double ratio = rng.normal_trunc(male ? kWingRatioMeanMale : kWingRatioMeanFemale,
                                  kWingRatioSigma, 0.92, 1.13);
  p.wingspan_m = round_to(ratio * p.height_m, 0.01);
  p.wingspan_m = std::clamp(p.wingspan_m, std::ceil(0.90 * p.height_m * 100.0) / 100.0,
                            std::floor(1.15 * p.height_m * 100.0) / 100.0);

  const double arm_sum = (1.0 - kShoulderFraction) * p.wingspan_m;
  std::size_t side = rng.weighted({kArmSameShare, kArmLeftShare, 1.0 - kArmSameShare - kArmLeftShare});
  double delta;
  if (side == 0) {
    delta = rng.uniform(-0.009, 0.009);
  } else {
    double mag = rng.bernoulli(kArmBigDeltaShare) ? rng.uniform(0.03, 0.059)
                                                  : rng.uniform(0.010, 0.030);
    delta = side == 1 ? mag : -mag;
  }
  delta = round_to(delta, 0.001);
  p.arm_left_m = round_to((arm_sum + delta) / 2.0, 0.001);
  p.arm_right_m = p.arm_left_m - delta;

  p.ipd_m = detail::snap(rng, male ? kIpdMeanMaleM : kIpdMeanFemaleM, kIpdSigmaM, 0.056,
                         0.072, 0.0001);
  p.handedness = rng.bernoulli(kRightHandedShare) ? Handedness::Right : Handedness::Left;

  // Demographics.
  p.disability = static_cast<Disability>(
      rng.weighted({1.0 - kMentalShare - kPhysicalShare, kMentalShare, kPhysicalShare}));
  if (p.disability == Disability::Physical) {
    p.fitness = Fitness::Low;
  } else {
    p.fitness = static_cast<Fitness>(rng.weighted({0.1429, 0.6531, 0.2040}));
  }

  switch (rng.weighted({48.0, 40.0, 12.0})) {
    case 0: p.age_years = rng.uniform_int(18, 23); break;
    case 1: p.age_years = rng.uniform_int(24, 27); break;
    default: p.age_years = rng.uniform_int(28, 64); break;
  }
  double rt = rng.normal(kReactionBase + kReactionAgeSlope * (p.age_years - 23), kReactionSigma);
  long ticks = std::clamp(std::lround(rt * 60.0), 8L, 36L);  // 1/60 s measurement grid
  p.reaction_time_s = static_cast<double>(ticks) / 60.0;

  static const std::vector<std::string> kEthnicities = {"asian", "white", "black", "hispanic"};
  p.ethnicity = kEthnicities[rng.weighted({60.0, 30.0, 6.0, 6.0})];
  for (const detail::LangProb& lp : detail::language_probs(p.ethnicity))
    if (lp.p > 0.0 && rng.bernoulli(lp.p)) p.languages.push_back(lp.code);

  p.colorblind = rng.bernoulli(kColorblindShare);

  double p_severe_hyper = std::clamp(0.16 + 0.012 * (p.age_years - 18), 0.0, 0.90);
  double u = rng.uniform01();
  p.hyperopia = u < p_severe_hyper               ? VisionSeverity::Severe
                : u < p_severe_hyper + 0.18      ? VisionSeverity::Mild
                                                 : VisionSeverity::None;
  switch (rng.weighted({0.28, 0.08, 0.64})) {
    case 0: p.myopia = VisionSeverity::None; break;
    case 1: p.myopia = VisionSeverity::Mild; break;
    default: p.myopia = VisionSeverity::Severe; break;
  }

  // Cognitive answers: mental disability or an idiopathic draw marks the
  // impaired pattern (always fails the >26 threshold); everyone else loses at
  // most a few points.
  const bool impaired =
      p.disability == Disability::Mental || rng.bernoulli(kIdiopathicImpairedShare);
  MocaAnswerCounts& m = p.moca_answers;
  if (impaired) {
    m.naming = rng.uniform_int(0, 2);
    m.serial7 = rng.uniform_int(0, 2);
    m.recall = rng.uniform_int(0, 2);
    m.abstraction = rng.uniform_int(0, 1);
    m.repetition = rng.uniform_int(0, 1);
    m.orientation = rng.uniform_int(1, 3);
  } else {
    m.naming = rng.bernoulli(0.92) ? 3 : 2;
    m.serial7 = 5 - static_cast<int>(rng.weighted({0.80, 0.15, 0.05}));  // 5/4/3
    m.recall = 5 - static_cast<int>(rng.weighted({0.55, 0.30, 0.15}));   // 5/4/3
    m.abstraction = rng.bernoulli(0.90) ? 2 : 1;
    m.repetition = rng.bernoulli(0.85) ? 2 : 1;
    m.orientation = rng.bernoulli(0.95) ? 4 : 3;
  }

  // Environment.
  double area = rng.uniform(4.5, 11.0);
  double aspect = rng.uniform(1.05, 1.6);
  p.room_length_m = round_to(std::sqrt(area * aspect), 0.01);
  p.room_width_m = round_to(std::sqrt(area / aspect), 0.01);

  const std::vector<detail::SiteRow>& sites = detail::lab_sites();
  std::vector<double> weights;
  for (const detail::SiteRow& s : sites) weights.push_back(s.weight);
  const detail::SiteRow& site = sites[rng.weighted(weights)];
  p.lat_deg = site.lat + rng.uniform(-0.15, 0.15);
  p.lon_deg = site.lon + rng.uniform(-0.15, 0.15);

  // Hardware: device share 52/42/6, host scalars by tether class.
  const std::vector<DeviceSpec>& table = default_device_table();
  switch (rng.weighted({52.0, 42.0, 6.0})) {
    case 0: p.device = table[1]; break;  // Vive Pro 2
    case 1: p.device = table[2]; break;  // Quest 2
    default: p.device = table[0]; break; // HTC Vive
  }
  if (p.device.model == "Quest 2") {
    p.host_cpu_ghz = round_to(rng.normal_trunc(3.2, 0.5, 2.0, 5.0), 0.1);
    p.host_gpu_mhs = round_to(rng.normal_trunc(45.0, 20.0, 8.0, 130.0), 0.1);
  } else {
    p.host_cpu_ghz = round_to(rng.normal_trunc(4.0, 0.6, 2.2, 5.5), 0.1);
    p.host_gpu_mhs = round_to(rng.normal_trunc(75.0, 25.0, 10.0, 140.0), 0.1);
  }

  validate_profile(p);
  return p;
}

// Deterministic population: user k's profile depends only on (seed, k), so
// generation may fan out across workers without changing output.
inline std::vector<UserProfile> sample_population(std::size_t n, std::uint64_t seed) {
  expect(n >= 1, Err::InvalidConfig, "population size must be >= 1");
  std::vector<UserProfile> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    char id[32];
    std::snprintf(id, sizeof id, "user_%03zu", k);
    out.push_back(sample_profile(derive_seed(seed, k), id));
  }
  return out;
}

}  // namespace vrinfer
