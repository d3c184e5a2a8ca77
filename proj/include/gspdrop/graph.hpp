// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_GRAPH_HPP
#define GSPDROP_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "gspdrop/io.hpp"
#include "gspdrop/kdtree.hpp"
#include "gspdrop/types.hpp"

namespace gspdrop {

/// How the Gaussian kernel width is chosen: `automatic()` uses the mean
/// length of the retained edges, `fixed(s)` uses s.
class SigmaPolicy {
 public:
  static SigmaPolicy automatic() { return SigmaPolicy(std::nullopt); }
  static SigmaPolicy fixed(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error("sigma must be a positive finite number");
    return SigmaPolicy(sigma);
  }

  bool is_auto() const noexcept { return !value_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  explicit SigmaPolicy(std::optional<double> v) : value_(v) {}
  std::optional<double> value_;
};

/// Symmetrized k-nearest-neighbour graph with Gaussian edge weights
/// W[i,j] = exp(-|p_i - p_j|^2 / sigma^2), stored in CSR form with columns
/// sorted inside each row.
///
/// Derived operators (never materialized densely):
///   D = diag(row sums of W), L = D - W, A = D^-1 W.
class NeighborhoodGraph {
 public:
  Index size() const noexcept { return static_cast<Index>(degrees_.size()); }
  Index k() const noexcept { return k_; }
  double sigma() const noexcept { return sigma_; }

  /// Undirected edge count (each {i, j} once).
  std::size_t edge_count() const noexcept { return cols_.size() / 2; }

  std::span<const Index> neighbors(Index i) const {
    return {cols_.data() + row_ptr_[static_cast<std::size_t>(i)],
            cols_.data() + row_ptr_[static_cast<std::size_t>(i) + 1]};
  }
  std::span<const double> weights(Index i) const {
    return {weights_.data() + row_ptr_[static_cast<std::size_t>(i)],
            weights_.data() + row_ptr_[static_cast<std::size_t>(i) + 1]};
  }

  /// W[i, j]; 0 when there is no edge (including i == j).
  double weight(Index i, Index j) const {
    const auto nb = neighbors(i);
    const auto it = std::lower_bound(nb.begin(), nb.end(), j);
    if (it == nb.end() || *it != j) return 0.0;
    return weights(i)[static_cast<std::size_t>(it - nb.begin())];
  }

  const Eigen::VectorXd& degrees() const noexcept { return degrees_; }

  /// (A x) for every column of x.
  template <typename Derived>
  Eigen::Matrix<double, Eigen::Dynamic, Derived::ColsAtCompileTime> transition_apply(
      const Eigen::MatrixBase<Derived>& x) const {
    check_rows(x.rows());
    Eigen::Matrix<double, Eigen::Dynamic, Derived::ColsAtCompileTime> out(x.rows(), x.cols());
    for (Index i = 0; i < size(); ++i) {
      out.row(i) = weighted_row_sum(i, x) / degrees_[i];
    }
    return out;
  }

  /// (L x) = D x - W x for every column of x.
  template <typename Derived>
  Eigen::Matrix<double, Eigen::Dynamic, Derived::ColsAtCompileTime> laplacian_apply(
      const Eigen::MatrixBase<Derived>& x) const {
    check_rows(x.rows());
    Eigen::Matrix<double, Eigen::Dynamic, Derived::ColsAtCompileTime> out(x.rows(), x.cols());
    for (Index i = 0; i < size(); ++i) {
      out.row(i) = degrees_[i] * x.row(i) - weighted_row_sum(i, x);
    }
    return out;
  }

  Eigen::SparseMatrix<double> adjacency_matrix() const {
    return assemble([](Index, double) { return 0.0; }, -1.0);
  }

  /// L = D - W with the diagonal set to the stored degrees.
  Eigen::SparseMatrix<double> laplacian_matrix() const {
    return assemble([this](Index i, double) { return degrees_[i]; }, 1.0);
  }

  /// Edge list "i j w", each undirected edge once with i < j, sorted by (i, j).
  void write_edge_list(std::ostream& out) const {
    for (Index i = 0; i < size(); ++i) {
      const auto nb = neighbors(i);
      const auto w = weights(i);
      for (std::size_t e = 0; e < nb.size(); ++e) {
        if (nb[e] > i) out << i << ' ' << nb[e] << ' ' << format_double(w[e]) << '\n';
      }
    }
  }

 private:
  friend NeighborhoodGraph build_knn_graph(const PointCloud&, Index, SigmaPolicy);

  void check_rows(Index rows) const {
    if (rows != size()) {
      throw Error("graph signal has length " + std::to_string(rows) + ", graph has " +
                  std::to_string(size()) + " nodes");
    }
  }

  template <typename Derived>
  Eigen::Matrix<double, 1, Derived::ColsAtCompileTime> weighted_row_sum(
      Index i, const Eigen::MatrixBase<Derived>& x) const {
    Eigen::Matrix<double, 1, Derived::ColsAtCompileTime> acc =
        Eigen::Matrix<double, 1, Derived::ColsAtCompileTime>::Zero(1, x.cols());
    const auto nb = neighbors(i);
    const auto w = weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e) acc += w[e] * x.row(nb[e]);
    return acc;
  }

  // Diagonal value from `diag(i, degree)`, off-diagonals scaled by `off_sign` * w;
  // the adjacency sign is flipped so it comes out positive.
  template <typename DiagFn>
  Eigen::SparseMatrix<double> assemble(DiagFn diag, double off_sign) const {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(cols_.size() + degrees_.size());
    const bool laplacian = off_sign > 0.0;
    for (Index i = 0; i < size(); ++i) {
      if (laplacian) triplets.emplace_back(i, i, diag(i, degrees_[i]));
      const auto nb = neighbors(i);
      const auto w = weights(i);
      for (std::size_t e = 0; e < nb.size(); ++e) {
        triplets.emplace_back(i, nb[e], laplacian ? -w[e] : w[e]);
      }
    }
    Eigen::SparseMatrix<double> m(size(), size());
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
  }

  Index k_ = 0;
  double sigma_ = 0.0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Index> cols_;
  std::vector<double> weights_;
  Eigen::VectorXd degrees_;
};

/// Connects every point to its k nearest neighbours (ties to the lower
/// index) and symmetrizes by union: {i, j} is an edge when either endpoint
/// selected the other.
///
/// Weights that underflow to 0 are clamped to the smallest normal double so
/// every stored weight stays in (0, 1] and every degree stays positive.
inline NeighborhoodGraph build_knn_graph(const PointCloud& cloud, Index k,
                                         SigmaPolicy sigma_policy = SigmaPolicy::automatic()) {
  const Index n = cloud.size();
  if (k < 1 || k > n - 1) {
    throw Error("k must be in [1, " + std::to_string(n - 1) + "], got " + std::to_string(k));
  }
  const auto& coords = cloud.coords();
  const KdTree tree(coords);

  struct Edge {
    Index a, b;
    double d2;
  };
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n * k));
  for (Index i = 0; i < n; ++i) {
    for (const auto& nb : tree.knn(i, k)) {
      const Index a = std::min(i, nb.index);
      const Index b = std::max(i, nb.index);
      edges.push_back({a, b, squared_distance(coords, a, b)});
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& x, const Edge& y) { return x.a < y.a || (x.a == y.a && x.b < y.b); });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& x, const Edge& y) { return x.a == y.a && x.b == y.b; }),
              edges.end());

  double sigma = 1.0;
  if (sigma_policy.is_auto()) {
    double total = 0.0;
    for (const auto& e : edges) total += std::sqrt(e.d2);
    const double mean = total / static_cast<double>(edges.size());
    // All retained edges of zero length: any sigma gives weight 1.
    if (mean > 0.0) sigma = mean;
  } else {
    sigma = *sigma_policy.value();
  }
  const double inv_s2 = 1.0 / (sigma * sigma);

  NeighborhoodGraph g;
  g.k_ = k;
  g.sigma_ = sigma;

  std::vector<std::size_t> counts(static_cast<std::size_t>(n), 0);
  for (const auto& e : edges) {
    ++counts[static_cast<std::size_t>(e.a)];
    ++counts[static_cast<std::size_t>(e.b)];
  }
  g.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < counts.size(); ++i) g.row_ptr_[i + 1] = g.row_ptr_[i] + counts[i];
  g.cols_.resize(g.row_ptr_.back());
  g.weights_.resize(g.row_ptr_.back());

  // Edges are sorted by (a, b), so row r first receives every a < r (as the
  // b endpoint) and then every b > r, each run ascending.
  std::vector<std::size_t> fill(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
  constexpr double kMinWeight = std::numeric_limits<double>::min();
  for (const auto& e : edges) {
    const double w = std::max(std::exp(-e.d2 * inv_s2), kMinWeight);
    auto& fa = fill[static_cast<std::size_t>(e.a)];
    g.cols_[fa] = e.b;
    g.weights_[fa++] = w;
    auto& fb = fill[static_cast<std::size_t>(e.b)];
    g.cols_[fb] = e.a;
    g.weights_[fb++] = w;
  }
  g.degrees_.resize(n);
  for (Index i = 0; i < n; ++i) {
    double d = 0.0;
    for (double w : g.weights(i)) d += w;
    g.degrees_[i] = d;
  }
  return g;
}

}  // namespace gspdrop

#endif  // GSPDROP_GRAPH_HPP
