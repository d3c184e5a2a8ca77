// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_RANDOM_HPP
#define GSPDROP_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gspdrop/types.hpp"

namespace gspdrop {

/// Seeded generator with a fixed seed-to-output mapping.
///
/// The engine is std::mt19937_64 constructed from the seed; its output
/// sequence is fixed by the C++ standard. Distributions are implemented here
/// rather than taken from <random>, whose algorithms vary between standard
/// libraries:
///   uniform01  - top 53 bits of one draw, times 2^-53
///   below(b)   - Lemire's multiply-shift with rejection (unbiased)
///   normal     - Marsaglia polar method, second variate cached
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    if (bound == 0) throw Error("Rng::below needs a positive bound");
    u128 product = static_cast<u128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<u128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0, v = 0.0, s = 0.0;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

  /// `count` distinct values from [0, n) via a partial Fisher-Yates shuffle,
  /// in draw order.
  std::vector<Index> sample_without_replacement(Index n, Index count) {
    if (count < 0 || count > n) throw Error("cannot draw " + std::to_string(count) + " of " + std::to_string(n));
    std::vector<Index> pool(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (Index i = 0; i < count; ++i) {
      const auto j = i + static_cast<Index>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(count));
    return pool;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gspdrop

#endif  // GSPDROP_RANDOM_HPP
