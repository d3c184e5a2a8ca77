// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_RANKING_HPP
#define GSPDROP_RANKING_HPP

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "gspdrop/types.hpp"

namespace gspdrop {

/// Indices of the `count` largest scores, highest first; equal scores keep
/// ascending index order.
inline std::vector<Index> rank_top_n(const ScoreVector& scores, Index count) {
  const Index n = scores.size();
  if (count < 0 || count > n) {
    throw Error("top-N of " + std::to_string(count) + " requested from " + std::to_string(n) + " scores");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const auto& v = scores.values();
  std::partial_sort(order.begin(), order.begin() + count, order.end(), [&](Index a, Index b) {
    return v[a] > v[b] || (v[a] == v[b] && a < b);
  });
  order.resize(static_cast<std::size_t>(count));
  return order;
}

}  // namespace gspdrop

#endif  // GSPDROP_RANKING_HPP
