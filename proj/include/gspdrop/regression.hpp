// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_REGRESSION_HPP
#define GSPDROP_REGRESSION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "gspdrop/presets.hpp"
#include "gspdrop/ranking.hpp"
#include "gspdrop/stats.hpp"
#include "gspdrop/types.hpp"

namespace gspdrop {

/// One pooled observation: the fourteen features of a point and its
/// adversarial score.
struct TrainingSample {
  std::array<double, kFeatureCount> features{};
  double target = 0.0;
};

struct FitOptions {
  double alpha = 0.05;
  /// Adds a constant column. The published model has none.
  bool intercept = false;
};

struct CoefficientStats {
  double value = 0.0;
  double std_error = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

/// Least-squares fit of target ~ sum_j c_j f_j with two-sided t-tests on
/// every coefficient.
struct RegressionFit {
  std::array<CoefficientStats, kFeatureCount> coefficients{};
  std::optional<CoefficientStats> intercept;
  double r_squared = 0.0;
  double residual_sum_squares = 0.0;
  std::size_t sample_count = 0;
  std::size_t degrees_of_freedom = 0;
  double alpha = 0.05;
  /// True when the residual vanished and significance came from the
  /// zero-residual rule instead of a t-distribution.
  bool exact_fit = false;

  /// Significant coefficients keep their value, the rest become 0.
  CoefficientSet to_coefficient_set(std::string provenance) const {
    CoefficientSet::Values values{};
    CoefficientSet::Flags flags{};
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      flags[j] = coefficients[j].significant;
      values[j] = flags[j] ? coefficients[j].value : 0.0;
    }
    return CoefficientSet(values, flags, std::move(provenance));
  }
};

namespace detail {

// A residual this small relative to the target norm is treated as an exact fit.
inline constexpr double kExactFitTolerance = 1e-10;

inline std::string column_label(Index column, bool intercept) {
  if (intercept && column == static_cast<Index>(kFeatureCount)) return "intercept";
  return "f" + std::to_string(column + 1);
}

}  // namespace detail

/// Ordinary least squares on a complete design. Columns 0..13 are f1..f14;
/// with `options.intercept` a column of ones is appended internally.
///
/// Standard errors follow s^2 (X^T X)^-1 with s^2 = RSS / (m - p), formed
/// from the R factor of a column-pivoted QR so X^T X is never built.
/// R^2 = 1 - RSS/TSS with TSS about the target mean, clamped to [0, 1]
/// (a no-intercept fit can do worse than the mean).
inline RegressionFit fit_mlr(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                             const FitOptions& options = {}) {
  if (features.cols() != static_cast<Index>(kFeatureCount)) {
    throw Error("design matrix needs 14 feature columns, got " + std::to_string(features.cols()));
  }
  if (features.rows() != targets.size()) throw Error("design rows and target count differ");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
  if (!features.allFinite() || !targets.allFinite()) throw Error("regression input is not finite");

  const Index m = features.rows();
  const Index p = static_cast<Index>(kFeatureCount) + (options.intercept ? 1 : 0);
  if (m <= p) {
    throw Error("regression needs more than " + std::to_string(p) + " samples, got " + std::to_string(m));
  }

  Eigen::MatrixXd design(m, p);
  design.leftCols(static_cast<Index>(kFeatureCount)) = features;
  if (options.intercept) design.col(p - 1).setOnes();

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < p) {
    std::string dependent;
    for (Index k = qr.rank(); k < p; ++k) {
      if (!dependent.empty()) dependent += ", ";
      dependent += detail::column_label(qr.colsPermutation().indices()[k], options.intercept);
    }
    throw Error("rank-deficient design (rank " + std::to_string(qr.rank()) + " of " + std::to_string(p) +
                "); dependent columns: " + dependent);
  }

  Eigen::VectorXd coef = qr.solve(targets);
  const Eigen::VectorXd residual = targets - design * coef;
  const double rss = residual.squaredNorm();
  const double target_norm = targets.norm();
  const auto dof = static_cast<double>(m - p);

  const Eigen::MatrixXd r_inv =
      qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::VectorXd unscaled_var(p);
  for (Index k = 0; k < p; ++k) unscaled_var[qr.colsPermutation().indices()[k]] = r_inv.row(k).squaredNorm();

  RegressionFit fit;
  fit.sample_count = static_cast<std::size_t>(m);
  fit.degrees_of_freedom = static_cast<std::size_t>(m - p);
  fit.alpha = options.alpha;
  fit.residual_sum_squares = rss;
  fit.exact_fit = std::sqrt(rss) <= detail::kExactFitTolerance * target_norm;

  const double s2 = rss / dof;
  auto stats_for = [&](Index col) {
    CoefficientStats s;
    s.value = coef[col];
    if (fit.exact_fit) {
      const double contribution = std::abs(s.value) * design.col(col).norm();
      if (contribution <= detail::kExactFitTolerance * target_norm) {
        s.value = 0.0;
        s.t_stat = 0.0;
        s.p_value = 1.0;
      } else {
        s.t_stat = std::copysign(std::numeric_limits<double>::infinity(), s.value);
        s.p_value = 0.0;
      }
      s.std_error = 0.0;
    } else {
      s.std_error = std::sqrt(s2 * unscaled_var[col]);
      if (s.std_error > 0.0) {
        s.t_stat = s.value / s.std_error;
        s.p_value = stats::student_t_two_sided_p(s.t_stat, dof);
      } else {
        s.t_stat = s.value == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), s.value);
        s.p_value = s.value == 0.0 ? 1.0 : 0.0;
      }
    }
    s.significant = s.p_value < options.alpha;
    return s;
  };
  for (std::size_t j = 0; j < kFeatureCount; ++j) fit.coefficients[j] = stats_for(static_cast<Index>(j));
  if (options.intercept) fit.intercept = stats_for(p - 1);

  const double tss = (targets.array() - targets.mean()).matrix().squaredNorm();
  if (tss > 0.0) {
    fit.r_squared = std::clamp(1.0 - rss / tss, 0.0, 1.0);
  } else {
    fit.r_squared = fit.exact_fit ? 1.0 : 0.0;
  }
  return fit;
}

inline RegressionFit fit_mlr(std::span<const TrainingSample> samples, const FitOptions& options = {}) {
  const auto m = static_cast<Index>(samples.size());
  Eigen::MatrixXd x(m, static_cast<Index>(kFeatureCount));
  Eigen::VectorXd y(m);
  for (Index i = 0; i < m; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < kFeatureCount; ++j) x(i, static_cast<Index>(j)) = s.features[j];
    y[i] = s.target;
  }
  return fit_mlr(x, y, options);
}

/// Pairs the `count` highest-scoring points (ties to the lower index) with
/// their feature rows.
inline std::vector<TrainingSample> select_top_targets(const ScoreVector& scores, const FeatureMatrix& features,
                                                      Index count) {
  if (scores.kind() != ScoreKind::normalized_adversarial) {
    throw Error("training targets must be normalized adversarial scores");
  }
  if (scores.size() != features.rows()) throw Error("score and feature row counts differ");
  std::vector<TrainingSample> samples;
  samples.reserve(static_cast<std::size_t>(count));
  for (Index i : rank_top_n(scores, count)) {
    TrainingSample s;
    for (std::size_t j = 0; j < kFeatureCount; ++j) s.features[j] = features.values()(i, static_cast<Index>(j));
    s.target = scores[i];
    samples.push_back(s);
  }
  return samples;
}

namespace detail {

inline nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

inline nlohmann::json stats_json(const CoefficientStats& s) {
  return {{"value", s.value},
          {"std_error", s.std_error},
          {"t", finite_or_null(s.t_stat)},
          {"p", s.p_value},
          {"significant", s.significant}};
}

}  // namespace detail

/// Structured fit report: one record per coefficient plus R^2, m and alpha.
/// Infinite t statistics (exact fits) are written as null.
inline nlohmann::json fit_report_json(const RegressionFit& fit) {
  nlohmann::json doc;
  auto& list = doc["coefficients"] = nlohmann::json::array();
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    auto entry = detail::stats_json(fit.coefficients[j]);
    entry["index"] = j + 1;
    list.push_back(std::move(entry));
  }
  if (fit.intercept) doc["intercept"] = detail::stats_json(*fit.intercept);
  doc["r_squared"] = fit.r_squared;
  doc["sample_count"] = fit.sample_count;
  doc["degrees_of_freedom"] = fit.degrees_of_freedom;
  doc["alpha"] = fit.alpha;
  doc["exact_fit"] = fit.exact_fit;
  return doc;
}

}  // namespace gspdrop

#endif  // GSPDROP_REGRESSION_HPP
