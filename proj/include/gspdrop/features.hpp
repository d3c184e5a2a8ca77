// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_FEATURES_HPP
#define GSPDROP_FEATURES_HPP

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "gspdrop/graph.hpp"
#include "gspdrop/io.hpp"
#include "gspdrop/kdtree.hpp"
#include "gspdrop/types.hpp"

namespace gspdrop {

/// Regularization weight of the graph low-pass filter (I + gamma L) q = p.
class LpfConfig {
 public:
  explicit LpfConfig(double gamma = 0.5) : gamma_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error("gamma must be a positive finite number");
  }
  double gamma() const noexcept { return gamma_; }

 private:
  double gamma_;
};

struct FeatureConfig {
  Index k = 10;
  SigmaPolicy sigma = SigmaPolicy::automatic();
  double gamma = 0.5;
  double ball_radius = 0.1;
};

namespace detail {

inline void check_graph_matches(const NeighborhoodGraph& graph, const PointCloud& cloud) {
  if (graph.size() != cloud.size()) {
    throw Error("graph has " + std::to_string(graph.size()) + " nodes but cloud has " +
                std::to_string(cloud.size()) + " points");
  }
}

}  // namespace detail

/// Row i is the transition-weighted mean of i's neighbours (f2..f4).
inline Eigen::MatrixX3d weighted_avg_coords(const NeighborhoodGraph& graph, const PointCloud& cloud) {
  detail::check_graph_matches(graph, cloud);
  return graph.transition_apply(cloud.coords());
}

/// Row i is (L P)_i, the graph second difference of the coordinates (f5..f7).
inline Eigen::MatrixX3d second_diff_coords(const NeighborhoodGraph& graph, const PointCloud& cloud) {
  detail::check_graph_matches(graph, cloud);
  return graph.laplacian_apply(cloud.coords());
}

/// v_i = |p_i - pbar_i| (f1).
inline Eigen::VectorXd local_variation(const NeighborhoodGraph& graph, const PointCloud& cloud) {
  return (cloud.coords() - weighted_avg_coords(graph, cloud)).rowwise().norm();
}

struct SignalSmoothness {
  Eigen::VectorXd average;      // A x
  Eigen::VectorXd second_diff;  // L x
};

/// Neighbourhood average and second difference of a scalar graph signal;
/// applied to v this yields (f8, f9).
inline SignalSmoothness variation_smoothness(const NeighborhoodGraph& graph, const Eigen::VectorXd& v) {
  return {graph.transition_apply(v), graph.laplacian_apply(v)};
}

namespace detail {

// p - (I + gamma L) x, accumulated in long double so the residual of the
// stored solution is measured rather than the rounding of its evaluation.
inline Eigen::MatrixX3d lpf_residual(const NeighborhoodGraph& graph, const Eigen::MatrixX3d& p,
                                     const Eigen::MatrixX3d& x, double gamma) {
  Eigen::MatrixX3d r(p.rows(), 3);
  for (Index i = 0; i < p.rows(); ++i) {
    const auto nb = graph.neighbors(i);
    const auto w = graph.weights(i);
    for (Index c = 0; c < 3; ++c) {
      long double lx = static_cast<long double>(graph.degrees()[i]) * x(i, c);
      for (std::size_t e = 0; e < nb.size(); ++e) lx -= static_cast<long double>(w[e]) * x(nb[e], c);
      r(i, c) = static_cast<double>(static_cast<long double>(p(i, c)) - x(i, c) - gamma * lx);
    }
  }
  return r;
}

}  // namespace detail

/// Solves (I + gamma L) q = p for the three coordinate columns with a sparse
/// LDL^T factorization and iterative refinement. Each column's residual must
/// reach 1e-8 of the column norm, or the floor 16 eps gamma ||L|| ||q|| below
/// which a double-precision q cannot go when gamma is huge.
inline Eigen::MatrixX3d lpf_solve(const NeighborhoodGraph& graph, const PointCloud& cloud,
                                  const LpfConfig& config) {
  detail::check_graph_matches(graph, cloud);
  const Index n = cloud.size();
  const double gamma = config.gamma();
  Eigen::SparseMatrix<double> system = graph.laplacian_matrix() * gamma;
  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();
  system += identity;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(system);
  if (solver.info() != Eigen::Success) throw Error("low-pass filter factorization failed");

  const Eigen::MatrixX3d& p = cloud.coords();
  Eigen::MatrixX3d q = solver.solve(p);
  const double laplacian_norm = 2.0 * graph.degrees().maxCoeff();
  auto within_bound = [&](const Eigen::MatrixX3d& x, const Eigen::MatrixX3d& r, bool with_floor) {
    for (Index c = 0; c < 3; ++c) {
      const double floor =
          with_floor ? 16.0 * std::numeric_limits<double>::epsilon() * gamma * laplacian_norm * x.col(c).norm() : 0.0;
      if (r.col(c).norm() > 1e-8 * p.col(c).norm() + floor) return false;
    }
    return true;
  };

  constexpr int kMaxRefinements = 4;
  Eigen::MatrixX3d r = detail::lpf_residual(graph, p, q, gamma);
  for (int pass = 0; pass < kMaxRefinements && !within_bound(q, r, false); ++pass) {
    q += solver.solve(r);
    r = detail::lpf_residual(graph, p, q, gamma);
  }
  if (within_bound(q, r, true)) return q;
  const Eigen::RowVector3d norms = r.colwise().norm();
  throw Error("low-pass filter did not reach the residual bound; residual norms " + format_double(norms[0]) +
              ", " + format_double(norms[1]) + ", " + format_double(norms[2]));
}

struct LpfDistance {
  Eigen::VectorXd distance;     // h (f12)
  Eigen::VectorXd average;      // A h (f13)
  Eigen::VectorXd second_diff;  // L h (f14)
};

inline LpfDistance lpf_distance_features(const NeighborhoodGraph& graph, const PointCloud& cloud,
                                         const Eigen::MatrixX3d& filtered) {
  detail::check_graph_matches(graph, cloud);
  if (filtered.rows() != cloud.size()) throw Error("filtered coordinates do not match the cloud");
  Eigen::VectorXd h = (cloud.coords() - filtered).rowwise().norm();
  auto smooth = variation_smoothness(graph, h);
  return {std::move(h), std::move(smooth.average), std::move(smooth.second_diff)};
}

/// Distance of every point to the cloud centroid (f10).
inline Eigen::VectorXd centroid_distance(const PointCloud& cloud) {
  return (cloud.coords().rowwise() - cloud.centroid()).rowwise().norm();
}

/// Points inside the closed ball of the given radius around each point,
/// the centre included (f11).
inline Eigen::VectorXd ball_count(const PointCloud& cloud, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("ball radius must be positive");
  const KdTree tree(cloud.coords());
  const double r2 = radius * radius;
  Eigen::VectorXd counts(cloud.size());
  for (Index i = 0; i < cloud.size(); ++i) counts[i] = static_cast<double>(tree.count_within(i, r2));
  return counts;
}

/// Assembles f1..f14 on an already-built graph.
inline FeatureMatrix extract_features(const NeighborhoodGraph& graph, const PointCloud& cloud,
                                      double gamma, double ball_radius) {
  const LpfConfig lpf(gamma);
  const Eigen::MatrixX3d avg = weighted_avg_coords(graph, cloud);
  const Eigen::MatrixX3d diff = second_diff_coords(graph, cloud);
  const Eigen::VectorXd v = (cloud.coords() - avg).rowwise().norm();
  const auto v_smooth = variation_smoothness(graph, v);
  const auto lpf_feats = lpf_distance_features(graph, cloud, lpf_solve(graph, cloud, lpf));

  FeatureMatrix::Storage f(cloud.size(), static_cast<Index>(kFeatureCount));
  f.col(0) = v;
  f.middleCols<3>(1) = avg;
  f.middleCols<3>(4) = diff;
  f.col(7) = v_smooth.average;
  f.col(8) = v_smooth.second_diff;
  f.col(9) = centroid_distance(cloud);
  f.col(10) = ball_count(cloud, ball_radius);
  f.col(11) = lpf_feats.distance;
  f.col(12) = lpf_feats.average;
  f.col(13) = lpf_feats.second_diff;
  return FeatureMatrix(std::move(f));
}

inline FeatureMatrix extract_features(const PointCloud& cloud, const FeatureConfig& config = {}) {
  const auto graph = build_knn_graph(cloud, config.k, config.sigma);
  return extract_features(graph, cloud, config.gamma, config.ball_radius);
}

}  // namespace gspdrop

#endif  // GSPDROP_FEATURES_HPP
