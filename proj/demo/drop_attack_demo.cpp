// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

// Builds a 1024-point cloud on a box surface, runs the averaged Drop100
// attack and a random Drop100 for comparison, and prints where the dropped
// points sit.

#include <cstdio>

#include "gspdrop/gspdrop.hpp"

int main() {
  using namespace gspdrop;

  Rng rng(2024);
  Eigen::MatrixX3d coords(1024, 3);
  for (Index i = 0; i < coords.rows(); ++i) {
    Eigen::Vector3d p(2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0);
    const auto face = static_cast<int>(rng.below(3));
    p[face] = p[face] < 0.0 ? -1.0 : 1.0;
    coords.row(i) = p.transpose().cwiseProduct(Eigen::RowVector3d(0.8, 0.5, 0.3));
  }
  const auto cloud = normalize_cloud(PointCloud(coords));

  const auto& avg = preset("avg-N100");
  const auto attack = drop_attack(cloud, avg.coefficients, 100);
  const auto baseline = random_drop(cloud, 100, 7);

  auto mean_radius = [&](const std::vector<Index>& idx) {
    double sum = 0.0;
    for (Index i : idx) sum += cloud.point(i).norm();
    return sum / static_cast<double>(idx.size());
  };

  std::printf("cloud: %ld points, retained after Drop100: %ld\n", static_cast<long>(cloud.size()),
              static_cast<long>(attack.retained_indices.size()));
  std::printf("mean |p| of dropped points  predicted: %.4f  random: %.4f\n", mean_radius(attack.dropped_indices),
              mean_radius(baseline.dropped_indices));
  std::printf("overlap predicted vs random: %.1f%%\n", overlap(attack.dropped_indices, baseline.dropped_indices));
  return 0;
}
