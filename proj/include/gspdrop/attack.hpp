// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_ATTACK_HPP
#define GSPDROP_ATTACK_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "gspdrop/features.hpp"
#include "gspdrop/random.hpp"
#include "gspdrop/ranking.hpp"
#include "gspdrop/types.hpp"

namespace gspdrop {

/// Min-max maps raw saliency onto [0, 1]. A constant input maps to all zeros.
inline ScoreVector normalize_scores(const ScoreVector& raw) {
  if (raw.kind() != ScoreKind::raw_saliency) throw Error("normalize_scores expects raw saliency scores");
  if (raw.size() == 0) return ScoreVector(Eigen::VectorXd(), ScoreKind::normalized_adversarial);
  const double lo = raw.values().minCoeff();
  const double hi = raw.values().maxCoeff();
  if (!(hi > lo)) {
    return ScoreVector(Eigen::VectorXd::Zero(raw.size()), ScoreKind::normalized_adversarial);
  }
  const double range = hi - lo;
  Eigen::VectorXd z = (raw.values().array() - lo) / range;
  return ScoreVector(std::move(z), ScoreKind::normalized_adversarial);
}

/// Linear score over the significant coefficients only, summed in feature
/// order f1..f14.
inline ScoreVector predict_scores(const FeatureMatrix& features, const CoefficientSet& coeffs) {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(features.rows());
  for (std::size_t j = 1; j <= kFeatureCount; ++j) {
    if (coeffs.is_significant(j)) z += coeffs.c(j) * features.feature(j);
  }
  return ScoreVector(std::move(z), ScoreKind::predicted);
}

/// Outcome of removing N points. Survivors are kept as raw rows since a
/// random drop may leave a single point.
struct AttackResult {
  Index n = 0;
  std::vector<Index> dropped_indices;   // model attacks: descending score; random: ascending index
  std::vector<Index> retained_indices;  // ascending
  Eigen::MatrixX3d retained_points;
  std::optional<ScoreVector> scores;    // absent for random drops
  std::string provenance;

  Index dropped_count() const noexcept { return static_cast<Index>(dropped_indices.size()); }

  PointCloud retained_cloud() const { return PointCloud(retained_points); }
};

namespace detail {

inline AttackResult remove_points(const PointCloud& cloud, std::vector<Index> dropped) {
  AttackResult result;
  result.n = cloud.size();
  std::vector<char> gone(static_cast<std::size_t>(cloud.size()), 0);
  for (Index i : dropped) gone[static_cast<std::size_t>(i)] = 1;
  for (Index i = 0; i < cloud.size(); ++i) {
    if (!gone[static_cast<std::size_t>(i)]) result.retained_indices.push_back(i);
  }
  result.retained_points.resize(static_cast<Index>(result.retained_indices.size()), 3);
  for (std::size_t r = 0; r < result.retained_indices.size(); ++r) {
    result.retained_points.row(static_cast<Index>(r)) = cloud.coords().row(result.retained_indices[r]);
  }
  result.dropped_indices = std::move(dropped);
  return result;
}

inline void check_drop_count(const PointCloud& cloud, Index count) {
  if (count < 0 || count >= cloud.size()) {
    throw Error("cannot drop " + std::to_string(count) + " of " + std::to_string(cloud.size()) +
                " points (need 0 <= N < n)");
  }
}

}  // namespace detail

/// Drops the `count` points with the highest predicted score computed from
/// precomputed features.
inline AttackResult drop_attack(const PointCloud& cloud, const FeatureMatrix& features,
                                const CoefficientSet& coeffs, Index count) {
  detail::check_drop_count(cloud, count);
  if (features.rows() != cloud.size()) throw Error("feature rows do not match the cloud");
  auto scores = predict_scores(features, coeffs);
  auto result = detail::remove_points(cloud, rank_top_n(scores, count));
  result.scores = std::move(scores);
  result.provenance = coeffs.provenance();
  return result;
}

/// No-box drop-N attack: features -> predicted scores -> remove the top N.
inline AttackResult drop_attack(const PointCloud& cloud, const CoefficientSet& coeffs, Index count,
                                const FeatureConfig& config = {}) {
  detail::check_drop_count(cloud, count);
  return drop_attack(cloud, extract_features(cloud, config), coeffs, count);
}

/// Drops `count` points drawn uniformly without replacement.
inline AttackResult random_drop(const PointCloud& cloud, Index count, std::uint64_t seed) {
  detail::check_drop_count(cloud, count);
  Rng rng(seed);
  auto dropped = rng.sample_without_replacement(cloud.size(), count);
  std::sort(dropped.begin(), dropped.end());
  auto result = detail::remove_points(cloud, std::move(dropped));
  result.provenance = "random seed " + std::to_string(seed);
  return result;
}

/// 100 |A n B| / N for two index sets of equal size N.
inline double overlap(std::span<const Index> a, std::span<const Index> b) {
  if (a.size() != b.size()) {
    throw Error("overlap needs equal-size sets, got " + std::to_string(a.size()) + " and " +
                std::to_string(b.size()));
  }
  if (a.empty()) throw Error("overlap of empty sets is undefined");
  const std::unordered_set<Index> set_a(a.begin(), a.end());
  const std::unordered_set<Index> set_b(b.begin(), b.end());
  if (set_a.size() != a.size() || set_b.size() != b.size()) throw Error("overlap sets contain duplicates");
  std::size_t common = 0;
  for (Index i : set_a) common += set_b.count(i);
  return 100.0 * static_cast<double>(common) / static_cast<double>(a.size());
}

/// Stand-in for classifier saliency: the planted linear score plus
/// Gaussian noise drawn from Rng(seed).
inline ScoreVector synthetic_score_oracle(const FeatureMatrix& features, const CoefficientSet& planted,
                                          double noise_sd, std::uint64_t seed) {
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw Error("noise_sd must be non-negative");
  Eigen::VectorXd s = predict_scores(features, planted).values();
  if (noise_sd > 0.0) {
    Rng rng(seed);
    for (Index i = 0; i < s.size(); ++i) s[i] += noise_sd * rng.normal();
  }
  return ScoreVector(std::move(s), ScoreKind::raw_saliency);
}

/// N, dropped indices with their scores, and the coefficient provenance.
inline nlohmann::json attack_report_json(const AttackResult& result) {
  nlohmann::json doc;
  doc["n"] = result.n;
  doc["N"] = result.dropped_count();
  doc["retained"] = result.retained_indices.size();
  doc["provenance"] = result.provenance;
  auto& dropped = doc["dropped"] = nlohmann::json::array();
  for (Index i : result.dropped_indices) {
    nlohmann::json entry{{"index", i}};
    if (result.scores) entry["score"] = (*result.scores)[i];
    dropped.push_back(std::move(entry));
  }
  return doc;
}

}  // namespace gspdrop

#endif  // GSPDROP_ATTACK_HPP
