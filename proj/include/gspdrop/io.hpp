// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_IO_HPP
#define GSPDROP_IO_HPP

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gspdrop/types.hpp"

namespace gspdrop {

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

inline bool skippable(std::string_view line) { return line.empty() || line.front() == '#'; }

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> tokens;
  constexpr std::string_view ws = " \t\r\n\f\v";
  std::size_t pos = 0;
  while (true) {
    pos = s.find_first_not_of(ws, pos);
    if (pos == std::string_view::npos) break;
    auto end = s.find_first_of(ws, pos);
    if (end == std::string_view::npos) end = s.size();
    tokens.push_back(s.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

/// Parses a decimal token. Non-finite spellings ("nan", "inf") parse and are
/// rejected by the caller so the message can say which.
inline bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace detail

/// Decimal text for a double carrying 17 significant digits, so re-parsing
/// reproduces the value bit for bit.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// .xyz clouds

inline PointCloud parse_xyz(std::istream& in) {
  std::vector<Eigen::Vector3d> points;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (detail::skippable(line)) continue;
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 3) {
      throw ParseError("malformed line: expected 3 numbers, found " + std::to_string(tokens.size()),
                       line_no);
    }
    Eigen::Vector3d p;
    for (int c = 0; c < 3; ++c) {
      if (!detail::parse_double(tokens[static_cast<std::size_t>(c)], p[c])) {
        throw ParseError("malformed line: '" + std::string(tokens[static_cast<std::size_t>(c)]) +
                             "' is not a number",
                         line_no);
      }
      if (!std::isfinite(p[c])) throw ParseError("non-finite coordinate", line_no);
    }
    points.push_back(p);
  }
  if (points.size() < 2) {
    throw ParseError("point cloud needs at least 2 points, got " + std::to_string(points.size()), 0);
  }
  return PointCloud::from_points(points);
}

inline PointCloud parse_xyz(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_xyz(in);
}

/// Writes raw rows; used for clouds and for attack survivors (which may hold
/// a single point).
inline void write_xyz_rows(std::ostream& out, const Eigen::MatrixX3d& coords) {
  for (Index i = 0; i < coords.rows(); ++i) {
    out << format_double(coords(i, 0)) << ' ' << format_double(coords(i, 1)) << ' '
        << format_double(coords(i, 2)) << '\n';
  }
}

inline void write_xyz(std::ostream& out, const PointCloud& cloud) { write_xyz_rows(out, cloud.coords()); }

inline std::string write_xyz(const PointCloud& cloud) {
  std::ostringstream out;
  write_xyz(out, cloud);
  return out.str();
}

// ---------------------------------------------------------------------------
// Score files: one number per line.

inline ScoreVector parse_scores(std::istream& in, Index n) {
  std::vector<double> values;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (detail::skippable(line)) continue;
    double v = 0.0;
    if (!detail::parse_double(line, v)) {
      throw ParseError("malformed score '" + std::string(line) + "'", line_no);
    }
    if (!std::isfinite(v)) throw ParseError("non-finite score", line_no);
    values.push_back(v);
  }
  if (static_cast<Index>(values.size()) != n) {
    throw ParseError("score count mismatch: expected " + std::to_string(n) + ", found " +
                         std::to_string(values.size()),
                     0);
  }
  return ScoreVector(Eigen::Map<const Eigen::VectorXd>(values.data(), n), ScoreKind::raw_saliency);
}

inline ScoreVector parse_scores(std::string_view text, Index n) {
  std::istringstream in{std::string(text)};
  return parse_scores(in, n);
}

/// Reads scores without a length check (the count is whatever the file holds).
inline ScoreVector parse_scores_any(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  Index count = 0;
  std::istringstream counter(text);
  for (std::string raw; std::getline(counter, raw);) {
    if (!detail::skippable(detail::trim(raw))) ++count;
  }
  return parse_scores(text, count);
}

inline void write_scores(std::ostream& out, const ScoreVector& scores) {
  for (Index i = 0; i < scores.size(); ++i) out << format_double(scores[i]) << '\n';
}

// ---------------------------------------------------------------------------
// Coefficient documents (JSON):
//   {"provenance": "...", "coefficients": [{"index": 1, "value": -44.032,
//    "significant": true}, ...]}

inline nlohmann::json coefficients_to_json(const CoefficientSet& set) {
  nlohmann::json doc;
  doc["provenance"] = set.provenance();
  auto& list = doc["coefficients"] = nlohmann::json::array();
  for (std::size_t j = 1; j <= kFeatureCount; ++j) {
    list.push_back({{"index", j}, {"value", set.c(j)}, {"significant", set.is_significant(j)}});
  }
  return doc;
}

inline CoefficientSet coefficients_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("coefficients") || !doc["coefficients"].is_array()) {
    throw Error("coefficient document needs a 'coefficients' array");
  }
  CoefficientSet::Values values{};
  CoefficientSet::Flags flags{};
  std::array<bool, kFeatureCount> seen{};
  for (const auto& entry : doc["coefficients"]) {
    if (!entry.is_object() || !entry.contains("index") || !entry.contains("value") ||
        !entry.contains("significant")) {
      throw Error("coefficient entry needs index, value and significant fields");
    }
    if (!entry["index"].is_number_integer() || !entry["value"].is_number() ||
        !entry["significant"].is_boolean()) {
      throw Error("coefficient entry has a field of the wrong type");
    }
    const auto index = entry["index"].get<long long>();
    if (index < 1 || index > static_cast<long long>(kFeatureCount)) {
      throw Error("coefficient index " + std::to_string(index) + " out of range 1..14");
    }
    const auto slot = static_cast<std::size_t>(index - 1);
    if (seen[slot]) throw Error("coefficient index " + std::to_string(index) + " declared twice");
    seen[slot] = true;
    values[slot] = entry["value"].get<double>();
    flags[slot] = entry["significant"].get<bool>();
  }
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    if (!seen[j]) throw Error("coefficient index " + std::to_string(j + 1) + " missing");
  }
  std::string provenance;
  if (doc.contains("provenance")) {
    if (!doc["provenance"].is_string()) throw Error("provenance must be a string");
    provenance = doc["provenance"].get<std::string>();
  }
  return CoefficientSet(values, flags, std::move(provenance));
}

inline CoefficientSet load_coefficients(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("coefficient document is not valid JSON: ") + e.what());
  }
  return coefficients_from_json(doc);
}

inline CoefficientSet load_coefficients(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_coefficients(in);
}

inline void write_coefficients(std::ostream& out, const CoefficientSet& set) {
  out << coefficients_to_json(set).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Feature CSV

inline void write_feature_csv(std::ostream& out, const FeatureMatrix& features) {
  for (std::size_t j = 1; j <= kFeatureCount; ++j) out << (j > 1 ? "," : "") << 'f' << j;
  out << '\n';
  const auto& v = features.values();
  for (Index i = 0; i < v.rows(); ++i) {
    for (Index j = 0; j < v.cols(); ++j) out << (j > 0 ? "," : "") << format_double(v(i, j));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

/// Centers the cloud on the origin and scales it so the farthest point has
/// unit norm.
inline PointCloud normalize_cloud(const PointCloud& cloud) {
  Eigen::MatrixX3d centered = cloud.coords().rowwise() - cloud.centroid();
  const double radius = centered.rowwise().norm().maxCoeff();
  if (!(radius > 0.0)) throw Error("degenerate cloud: all points coincide");
  centered /= radius;
  return PointCloud(std::move(centered));
}

}  // namespace gspdrop

#endif  // GSPDROP_IO_HPP
