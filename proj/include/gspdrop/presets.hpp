// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_PRESETS_HPP
#define GSPDROP_PRESETS_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gspdrop/types.hpp"

namespace gspdrop {

/// A published coefficient row: the coefficients fitted to the top-N
/// adversarial points of one classifier, and the R^2 (percent) reported
/// with them. Averaged presets carry no R^2.
struct Preset {
  std::string name;
  std::string network;
  int top_n;
  CoefficientSet coefficients;
  std::optional<double> r_squared_percent;
};

/// Mean of several coefficient sets. Insignificant entries count as 0; an
/// index is significant in the result when any input flags it.
inline CoefficientSet average_coefficients(std::span<const CoefficientSet> sets) {
  if (sets.empty()) throw Error("cannot average an empty list of coefficient sets");
  CoefficientSet::Values sum{};
  CoefficientSet::Flags any{};
  std::string provenance;
  for (const auto& set : sets) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      sum[j] += set.values()[j];
      any[j] = any[j] || set.significant()[j];
    }
    if (!provenance.empty()) provenance += " + ";
    provenance += set.provenance();
  }
  const double count = static_cast<double>(sets.size());
  for (auto& v : sum) v /= count;
  return CoefficientSet(sum, any, std::move(provenance));
}

namespace detail {

struct PresetRow {
  const char* network;
  int top_n;
  CoefficientSet::Values values;
  double r_squared_percent;
  const char* note;
};

// Three-decimal rows as published. A zero entry marks an insignificant
// coefficient at alpha = 0.05.
inline constexpr PresetRow kPresetRows[] = {
    {"pointnet", 50,
     {-38.043, 0.007, 0.005, -0.009, 0, 0, 0, 0, 4.659, 0.648, 0.011, -3.554, 12.309, 0.196}, 94.3, ""},
    {"pointnet", 100,
     {-44.032, 0.007, 0.006, -0.008, 0, 0, 0, 0, 5.113, 0.636, 0.011, -3.139, 11.733, 0.164}, 94.2, ""},
    {"pointnet", 150,
     {-42.295, 0.007, 0.006, -0.007, 0, 0, 0, 0, 4.904, 0.623, 0.010, -3.055, 11.470, 0.160}, 94.1, ""},
    {"pointnet", 200,
     {-41.451, 0.007, 0.005, -0.007, 0, 0, 0, 0, 4.819, 0.611, 0.010, -2.969, 11.207, 0.153}, 93.9, ""},
    {"pointnet2", 50,
     {-54.854, 0.009, 0.006, -0.007, 0, 0, 0, 8.859, 6.112, 0.649, 0.011, -2.665, 11.375, 0.122}, 94.3, ""},
    {"pointnet2", 100,
     {-49.452, 0.008, 0.005, -0.007, 0, 0, 0, 6.851, 5.544, 0.636, 0.010, -2.908, 11.370, 0.148}, 94.2, ""},
    {"pointnet2", 150,
     {-44.927, 0.008, -0.006, -0.008, 0, 0, 0, 3.120, 5.125, 0.624, 0.010, -3.067, 11.320, 0.161}, 94.1,
     "c3 = -0.006 kept as published; the neighbouring rows print a positive c3, so the sign may be a typo"},
    {"pointnet2", 200,
     {-43.109, 0.007, 0.005, -0.007, 0, 0, 0, 2.489, 4.938, 0.612, 0.010, -3.057, 11.091, 0.163}, 93.9, ""},
    {"dgcnn", 50,
     {-52.555, 0.006, 0.006, -0.008, 0, 0, 0, 10.169, 5.870, 0.648, 0.011, -3.058, 11.745, 0.157}, 94.4, ""},
    {"dgcnn", 100,
     {-46.105, 0.006, 0.005, -0.007, 0, 0, 0, 4.473, 5.241, 0.636, 0.011, -3.257, 11.818, 0.177}, 94.3, ""},
    {"dgcnn", 150,
     {-43.374, 0.007, 0.005, -0.007, 0, 0, 0, 3.352, 4.960, 0.623, 0.011, -3.179, 11.540, 0.173}, 94.2, ""},
    {"dgcnn", 200,
     {-41.795, 0.006, 0.004, -0.007, 0, 0, 0, 3.585, 4.806, 0.610, 0.011, -3.153, 11.330, 0.174}, 94.0, ""},
};

inline std::string preset_name(std::string_view network, int top_n) {
  return std::string(network) + "-N" + std::to_string(top_n);
}

}  // namespace detail

/// Every bundled preset: the twelve published rows followed by the four
/// cross-network averages `avg-N{50,100,150,200}`.
inline const std::vector<Preset>& bundled_presets() {
  static const std::vector<Preset> presets = [] {
    std::vector<Preset> out;
    for (const auto& row : detail::kPresetRows) {
      std::string name = detail::preset_name(row.network, row.top_n);
      std::string provenance = name;
      if (row.note[0] != '\0') provenance += " (" + std::string(row.note) + ")";
      out.push_back({name, row.network, row.top_n,
                     CoefficientSet::from_values(row.values, provenance), row.r_squared_percent});
    }
    for (int top_n : {50, 100, 150, 200}) {
      std::vector<CoefficientSet> rows;
      for (const auto& p : out) {
        if (p.top_n == top_n && p.network != "avg") rows.push_back(p.coefficients);
      }
      auto averaged = average_coefficients(rows);
      std::string name = detail::preset_name("avg", top_n);
      out.push_back({name, "avg", top_n,
                     CoefficientSet(averaged.values(), averaged.significant(),
                                    name + " = mean of " + averaged.provenance()),
                     std::nullopt});
    }
    return out;
  }();
  return presets;
}

inline std::optional<Preset> find_preset(std::string_view name) {
  const auto& all = bundled_presets();
  auto it = std::find_if(all.begin(), all.end(), [&](const Preset& p) { return p.name == name; });
  if (it == all.end()) return std::nullopt;
  return *it;
}

inline const Preset& preset(std::string_view name) {
  const auto& all = bundled_presets();
  auto it = std::find_if(all.begin(), all.end(), [&](const Preset& p) { return p.name == name; });
  if (it == all.end()) throw Error("unknown preset '" + std::string(name) + "'");
  return *it;
}

}  // namespace gspdrop

#endif  // GSPDROP_PRESETS_HPP
