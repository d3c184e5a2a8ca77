// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_KDTREE_HPP
#define GSPDROP_KDTREE_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <vector>

#include <Eigen/Dense>

#include "gspdrop/types.hpp"

namespace gspdrop {

/// Squared distance between rows i and j, evaluated in a fixed order so that
/// every caller sees bit-identical values (tie-breaking relies on it).
inline double squared_distance(const Eigen::MatrixX3d& coords, Index i, Index j) {
  const double dx = coords(i, 0) - coords(j, 0);
  const double dy = coords(i, 1) - coords(j, 1);
  const double dz = coords(i, 2) - coords(j, 2);
  return dx * dx + dy * dy + dz * dz;
}

struct Neighbor {
  double squared_distance;
  Index index;

  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    return a.squared_distance < b.squared_distance ||
           (a.squared_distance == b.squared_distance && a.index < b.index);
  }
};

/// Static 3-d tree over the rows of a coordinate matrix. The matrix must
/// outlive the tree.
class KdTree {
 public:
  explicit KdTree(const Eigen::MatrixX3d& coords, Index leaf_size = 8)
      : coords_(coords), leaf_size_(std::max<Index>(leaf_size, 1)) {
    order_.resize(static_cast<std::size_t>(coords.rows()));
    std::iota(order_.begin(), order_.end(), Index{0});
    if (!order_.empty()) build(0, static_cast<Index>(order_.size()));
  }

  /// The k nearest rows to row `query`, excluding `query` itself, sorted by
  /// (squared distance, index). Equal distances resolve to the lower index.
  std::vector<Neighbor> knn(Index query, Index k) const {
    std::vector<Neighbor> heap;  // max-heap on (distance, index)
    heap.reserve(static_cast<std::size_t>(k) + 1);
    if (k > 0 && !nodes_.empty()) search_knn(0, query, k, heap);
    std::sort_heap(heap.begin(), heap.end());
    return heap;
  }

  /// Number of rows within the closed ball of squared radius `r2` around row `query`
  /// (the query row included).
  Index count_within(Index query, double r2) const {
    Index count = 0;
    if (!nodes_.empty()) search_radius(0, query, r2, count);
    return count;
  }

 private:
  struct Node {
    Index begin = 0, end = 0;  // range into order_
    int axis = -1;             // -1 marks a leaf
    double split = 0.0;
    std::int32_t left = -1, right = -1;
  };

  std::int32_t build(Index begin, Index end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({begin, end});
    if (end - begin <= leaf_size_) return id;

    Eigen::RowVector3d lo = coords_.row(order_[static_cast<std::size_t>(begin)]);
    Eigen::RowVector3d hi = lo;
    for (Index i = begin; i < end; ++i) {
      lo = lo.cwiseMin(coords_.row(order_[static_cast<std::size_t>(i)]));
      hi = hi.cwiseMax(coords_.row(order_[static_cast<std::size_t>(i)]));
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    if (hi[axis] == lo[axis]) return id;  // all coincident: keep as leaf

    const Index mid = begin + (end - begin) / 2;
    auto first = order_.begin() + begin;
    std::nth_element(first, order_.begin() + mid, order_.begin() + end,
                     [&](Index a, Index b) { return coords_(a, axis) < coords_(b, axis); });
    const double split = coords_(order_[static_cast<std::size_t>(mid)], axis);

    const auto left = build(begin, mid);
    const auto right = build(mid, end);
    Node& node = nodes_[static_cast<std::size_t>(id)];
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return id;
  }

  void search_knn(std::int32_t id, Index query, Index k, std::vector<Neighbor>& heap) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.axis < 0) {
      for (Index i = node.begin; i < node.end; ++i) {
        const Index j = order_[static_cast<std::size_t>(i)];
        if (j == query) continue;
        const Neighbor cand{squared_distance(coords_, query, j), j};
        if (static_cast<Index>(heap.size()) < k) {
          heap.push_back(cand);
          std::push_heap(heap.begin(), heap.end());
        } else if (cand < heap.front()) {
          std::pop_heap(heap.begin(), heap.end());
          heap.back() = cand;
          std::push_heap(heap.begin(), heap.end());
        }
      }
      return;
    }
    const double diff = coords_(query, node.axis) - node.split;
    const auto near = diff < 0.0 ? node.left : node.right;
    const auto far = diff < 0.0 ? node.right : node.left;
    search_knn(near, query, k, heap);
    // `<=` keeps subtrees that may still hold equal-distance ties.
    if (static_cast<Index>(heap.size()) < k || diff * diff <= heap.front().squared_distance) {
      search_knn(far, query, k, heap);
    }
  }

  void search_radius(std::int32_t id, Index query, double r2, Index& count) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.axis < 0) {
      for (Index i = node.begin; i < node.end; ++i) {
        if (squared_distance(coords_, query, order_[static_cast<std::size_t>(i)]) <= r2) ++count;
      }
      return;
    }
    const double diff = coords_(query, node.axis) - node.split;
    const auto near = diff < 0.0 ? node.left : node.right;
    const auto far = diff < 0.0 ? node.right : node.left;
    search_radius(near, query, r2, count);
    if (diff * diff <= r2) search_radius(far, query, r2, count);
  }

  const Eigen::MatrixX3d& coords_;
  Index leaf_size_;
  std::vector<Index> order_;
  std::vector<Node> nodes_;
};

}  // namespace gspdrop

#endif  // GSPDROP_KDTREE_HPP
