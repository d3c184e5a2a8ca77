// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_TYPES_HPP
#define GSPDROP_TYPES_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gspdrop/error.hpp"

namespace gspdrop {

using Index = Eigen::Index;

/// Number of per-point features (f1..f14).
inline constexpr std::size_t kFeatureCount = 14;

/// An n x 3 set of finite coordinates with n >= 2.
class PointCloud {
 public:
  explicit PointCloud(Eigen::MatrixX3d coords) : coords_(std::move(coords)) {
    if (coords_.rows() < 2) {
      throw Error("point cloud needs at least 2 points, got " + std::to_string(coords_.rows()));
    }
    if (!coords_.allFinite()) {
      throw Error("point cloud contains a non-finite coordinate");
    }
  }

  static PointCloud from_points(std::span<const Eigen::Vector3d> points) {
    Eigen::MatrixX3d coords(static_cast<Index>(points.size()), 3);
    for (std::size_t i = 0; i < points.size(); ++i) {
      coords.row(static_cast<Index>(i)) = points[i].transpose();
    }
    return PointCloud(std::move(coords));
  }

  Index size() const noexcept { return coords_.rows(); }
  const Eigen::MatrixX3d& coords() const noexcept { return coords_; }
  Eigen::Vector3d point(Index i) const { return coords_.row(i).transpose(); }
  Eigen::RowVector3d centroid() const { return coords_.colwise().mean(); }

  PointCloud translated(const Eigen::RowVector3d& offset) const {
    return PointCloud(coords_.rowwise() + offset);
  }

  friend bool operator==(const PointCloud& a, const PointCloud& b) {
    return a.coords_.rows() == b.coords_.rows() && a.coords_ == b.coords_;
  }

 private:
  Eigen::MatrixX3d coords_;
};

enum class ScoreKind { raw_saliency, normalized_adversarial, predicted };

inline const char* to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::raw_saliency: return "raw-saliency";
    case ScoreKind::normalized_adversarial: return "normalized-adversarial";
    case ScoreKind::predicted: return "predicted";
  }
  return "unknown";
}

/// Per-point scores. Normalized adversarial scores are confined to [0, 1].
class ScoreVector {
 public:
  ScoreVector(Eigen::VectorXd values, ScoreKind kind) : values_(std::move(values)), kind_(kind) {
    if (!values_.allFinite()) {
      throw Error("score vector contains a non-finite value");
    }
    if (kind_ == ScoreKind::normalized_adversarial &&
        (values_.size() > 0 && (values_.minCoeff() < 0.0 || values_.maxCoeff() > 1.0))) {
      throw Error("normalized adversarial scores must lie in [0, 1]");
    }
  }

  Index size() const noexcept { return values_.size(); }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  double operator[](Index i) const { return values_[i]; }
  ScoreKind kind() const noexcept { return kind_; }

 private:
  Eigen::VectorXd values_;
  ScoreKind kind_;
};

/// Fourteen regression coefficients c1..c14 (stored 0-based) with the
/// significance flag of each. Insignificant entries are always exactly 0.
class CoefficientSet {
 public:
  using Values = std::array<double, kFeatureCount>;
  using Flags = std::array<bool, kFeatureCount>;

  CoefficientSet(Values values, Flags significant, std::string provenance)
      : values_(values), significant_(significant), provenance_(std::move(provenance)) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      if (!std::isfinite(values_[j])) {
        throw Error("coefficient c" + std::to_string(j + 1) + " is not finite");
      }
      if (!significant_[j] && values_[j] != 0.0) {
        throw Error("coefficient c" + std::to_string(j + 1) + " is insignificant but nonzero");
      }
    }
  }

  /// Builds a set where every nonzero value is flagged significant.
  static CoefficientSet from_values(const Values& values, std::string provenance) {
    Flags flags{};
    for (std::size_t j = 0; j < kFeatureCount; ++j) flags[j] = values[j] != 0.0;
    return CoefficientSet(values, flags, std::move(provenance));
  }

  const Values& values() const noexcept { return values_; }
  const Flags& significant() const noexcept { return significant_; }
  const std::string& provenance() const noexcept { return provenance_; }

  /// 1-based access matching the feature numbering f1..f14.
  double c(std::size_t j) const { return values_.at(j - 1); }
  bool is_significant(std::size_t j) const { return significant_.at(j - 1); }

  CoefficientSet scaled(double factor) const {
    Values v = values_;
    for (auto& x : v) x *= factor;
    Flags f = significant_;
    return CoefficientSet(v, f, provenance_);
  }

  friend bool operator==(const CoefficientSet& a, const CoefficientSet& b) {
    return a.values_ == b.values_ && a.significant_ == b.significant_ &&
           a.provenance_ == b.provenance_;
  }

 private:
  Values values_;
  Flags significant_;
  std::string provenance_;
};

/// n x 14 feature rows, columns ordered f1..f14.
class FeatureMatrix {
 public:
  using Storage = Eigen::Matrix<double, Eigen::Dynamic, static_cast<int>(kFeatureCount)>;

  explicit FeatureMatrix(Storage values) : values_(std::move(values)) {
    if (!values_.allFinite()) {
      throw Error("feature matrix contains a non-finite entry");
    }
  }

  Index rows() const noexcept { return values_.rows(); }
  const Storage& values() const noexcept { return values_; }

  /// Column of feature f_j, j in 1..14.
  auto feature(std::size_t j) const { return values_.col(static_cast<Index>(j - 1)); }
  auto row(Index i) const { return values_.row(i); }

 private:
  Storage values_;
};

}  // namespace gspdrop

#endif  // GSPDROP_TYPES_HPP
