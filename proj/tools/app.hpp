// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_TOOLS_APP_HPP
#define GSPDROP_TOOLS_APP_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gspdrop/gspdrop.hpp"

namespace gspdrop::cli {

namespace fs = std::filesystem;

struct RunConfig {
  Index k = 10;
  std::string sigma = "auto";
  double gamma = 0.5;
  double ball_radius = 0.1;
  Index top_n = 100;
  std::vector<Index> top_n_sweep{50, 100, 150, 200};
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::string preset;
  bool random = false;
  bool normalize = false;
  std::string output;

  FeatureConfig feature_config() const {
    FeatureConfig c;
    c.k = k;
    c.gamma = gamma;
    c.ball_radius = ball_radius;
    if (sigma == "auto") {
      c.sigma = SigmaPolicy::automatic();
    } else {
      double value = 0.0;
      if (!gspdrop::detail::parse_double(sigma, value)) {
        throw Error("--sigma expects 'auto' or a positive number, got '" + sigma + "'");
      }
      c.sigma = SigmaPolicy::fixed(value);
    }
    return c;
  }
};

namespace detail {

inline PointCloud read_cloud(const fs::path& path, bool normalize) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open cloud file '" + path.string() + "'");
  try {
    auto cloud = parse_xyz(in);
    return normalize ? normalize_cloud(cloud) : cloud;
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

inline ScoreVector read_scores(const fs::path& path, std::optional<Index> n) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open score file '" + path.string() + "'");
  try {
    return n ? parse_scores(in, *n) : parse_scores_any(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

inline CoefficientSet resolve_coefficients(const RunConfig& cfg, const std::string& coeff_path) {
  if (!cfg.preset.empty() && !coeff_path.empty()) throw Error("give either --preset or a coefficient file, not both");
  if (!cfg.preset.empty()) return preset(cfg.preset).coefficients;
  if (coeff_path.empty()) throw Error("no coefficients: pass --preset NAME or a coefficient file");
  std::ifstream in(coeff_path);
  if (!in) throw Error("cannot open coefficient file '" + coeff_path + "'");
  try {
    return load_coefficients(in);
  } catch (const Error& e) {
    throw Error(coeff_path + ": " + e.what());
  }
}

/// Writes through `body` to --output when given, otherwise to `fallback`.
inline void emit(const std::string& output, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& body) {
  if (output.empty()) {
    body(fallback);
    fallback.flush();
    if (!fallback) throw Error("failed writing to standard output");
    return;
  }
  std::ofstream file(output, std::ios::trunc);
  if (!file) throw Error("cannot open output file '" + output + "'");
  body(file);
  file.flush();
  if (!file) throw Error("failed writing '" + output + "'");
}

struct CorpusPair {
  std::string name;
  fs::path cloud;
  fs::path scores;
};

/// Pairs `<dir>/<stem>.xyz` with the score file of the same stem.
inline std::vector<CorpusPair> match_corpus(const fs::path& cloud_dir, const fs::path& score_dir) {
  for (const auto& dir : {cloud_dir, score_dir}) {
    if (!fs::is_directory(dir)) throw Error("not a directory: '" + dir.string() + "'");
  }
  std::map<std::string, fs::path> clouds;
  std::map<std::string, std::vector<fs::path>> scores;
  for (const auto& entry : fs::directory_iterator(cloud_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xyz") {
      clouds[entry.path().stem().string()] = entry.path();
    }
  }
  for (const auto& entry : fs::directory_iterator(score_dir)) {
    if (entry.is_regular_file()) scores[entry.path().stem().string()].push_back(entry.path());
  }
  if (clouds.empty()) throw Error("no .xyz clouds in '" + cloud_dir.string() + "'");

  std::vector<std::string> problems;
  std::vector<CorpusPair> pairs;
  for (const auto& [stem, path] : clouds) {
    auto it = scores.find(stem);
    if (it == scores.end()) {
      problems.push_back("cloud without scores: " + path.string());
    } else if (it->second.size() > 1) {
      problems.push_back("several score files for " + stem);
    } else {
      pairs.push_back({stem, path, it->second.front()});
    }
  }
  for (const auto& [stem, paths] : scores) {
    if (!clouds.count(stem)) {
      for (const auto& p : paths) problems.push_back("scores without cloud: " + p.string());
    }
  }
  if (!problems.empty()) {
    std::string msg = "unmatched corpus files:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(msg);
  }
  return pairs;
}

}  // namespace detail

inline void add_feature_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--k", cfg.k, "Neighbours per point in the kNN graph")->capture_default_str();
  cmd->add_option("--sigma", cfg.sigma, "Edge kernel width: 'auto' (mean edge length) or a number")
      ->capture_default_str();
  cmd->add_option("--gamma", cfg.gamma, "Low-pass filter regularization weight")->capture_default_str();
  cmd->add_option("--ball-radius", cfg.ball_radius, "Radius of the point-count ball")->capture_default_str();
  cmd->add_flag("--normalize", cfg.normalize, "Center and scale the cloud to unit radius before analysis");
}

/// Runs the command line; returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph-signal features, saliency regression and no-box drop attacks for point clouds"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string cloud_path, coeff_path, cloud_dir, score_dir, scores_a, scores_b;

  auto* features = app.add_subcommand("features", "Write the n x 14 feature CSV for a cloud");
  features->add_option("cloud", cloud_path, "Input .xyz cloud")->required();
  add_feature_flags(features, cfg);
  features->add_option("--output", cfg.output, "Output file (default: stdout)");

  auto* graph = app.add_subcommand("graph", "Dump the kNN graph edge list 'i j w'");
  graph->add_option("cloud", cloud_path, "Input .xyz cloud")->required();
  graph->add_option("--k", cfg.k, "Neighbours per point")->capture_default_str();
  graph->add_option("--sigma", cfg.sigma, "'auto' or a number")->capture_default_str();
  graph->add_flag("--normalize", cfg.normalize, "Normalize the cloud first");
  graph->add_option("--output", cfg.output, "Output file (default: stdout)");

  auto* fit = app.add_subcommand("fit", "Fit the saliency regression over a corpus of clouds and scores");
  fit->add_option("clouds", cloud_dir, "Directory of .xyz clouds")->required();
  fit->add_option("scores", score_dir, "Directory of score files matched by file stem")->required();
  add_feature_flags(fit, cfg);
  fit->add_option("--top-n", cfg.top_n, "Highest-scoring points taken from each cloud")->capture_default_str();
  fit->add_option("--alpha", cfg.alpha, "Significance level of the t-tests")->capture_default_str();
  fit->add_option("--output", cfg.output, "Write the fitted coefficient document here");

  auto* predict = app.add_subcommand("predict", "Predict adversarial scores from features");
  predict->add_option("cloud", cloud_path, "Input .xyz cloud")->required();
  predict->add_option("coefficients", coeff_path, "Coefficient document (or use --preset)");
  add_feature_flags(predict, cfg);
  predict->add_option("--preset", cfg.preset, "Bundled coefficient preset");
  predict->add_option("--output", cfg.output, "Output file (default: stdout)");

  auto* attack = app.add_subcommand("attack", "Drop the N points with the highest predicted score");
  attack->add_option("cloud", cloud_path, "Input .xyz cloud")->required();
  attack->add_option("coefficients", coeff_path, "Coefficient document (or use --preset)");
  add_feature_flags(attack, cfg);
  attack->add_option("--preset", cfg.preset, "Bundled coefficient preset");
  attack->add_option("--top-n", cfg.top_n, "Number of points to drop")->capture_default_str();
  attack->add_flag("--random", cfg.random, "Drop uniformly random points instead");
  attack->add_option("--seed", cfg.seed, "Seed for --random")->capture_default_str();
  attack->add_option("--output", cfg.output, "Write the retained cloud here");

  auto* overlap_cmd = app.add_subcommand("overlap", "Percentage overlap of top-N sets of two score files");
  overlap_cmd->add_option("scores_a", scores_a, "First score file")->required();
  overlap_cmd->add_option("scores_b", scores_b, "Second score file")->required();
  overlap_cmd->add_option("--top-n", cfg.top_n_sweep, "One or more N values")->capture_default_str();
  overlap_cmd->add_option("--output", cfg.output, "Output file (default: stdout)");

  auto* normalize = app.add_subcommand("normalize", "Center a cloud and scale it to unit radius");
  normalize->add_option("cloud", cloud_path, "Input .xyz cloud")->required();
  normalize->add_option("--output", cfg.output, "Output file (default: stdout)");

  auto* presets = app.add_subcommand("presets", "List bundled presets, or print one with --preset");
  presets->add_option("--preset", cfg.preset, "Preset to print as a coefficient document");
  presets->add_option("--output", cfg.output, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*features) {
      const auto config = cfg.feature_config();
      const auto cloud = detail::read_cloud(cloud_path, cfg.normalize);
      const auto f = extract_features(cloud, config);
      detail::emit(cfg.output, out, [&](std::ostream& os) { write_feature_csv(os, f); });
    } else if (*graph) {
      const auto config = cfg.feature_config();
      const auto cloud = detail::read_cloud(cloud_path, cfg.normalize);
      const auto g = build_knn_graph(cloud, config.k, config.sigma);
      detail::emit(cfg.output, out, [&](std::ostream& os) { g.write_edge_list(os); });
    } else if (*fit) {
      const auto config = cfg.feature_config();
      const auto pairs = detail::match_corpus(cloud_dir, score_dir);
      std::vector<TrainingSample> pooled;
      for (const auto& pair : pairs) {
        const auto cloud = detail::read_cloud(pair.cloud, cfg.normalize);
        const auto scores = normalize_scores(detail::read_scores(pair.scores, cloud.size()));
        if (cfg.top_n > cloud.size()) {
          throw Error(pair.cloud.string() + ": --top-n " + std::to_string(cfg.top_n) + " exceeds its " +
                      std::to_string(cloud.size()) + " points");
        }
        const auto f = extract_features(cloud, config);
        const auto samples = select_top_targets(scores, f, cfg.top_n);
        pooled.insert(pooled.end(), samples.begin(), samples.end());
      }
      FitOptions options;
      options.alpha = cfg.alpha;
      const auto result = fit_mlr(pooled, options);
      auto report = fit_report_json(result);
      report["clouds"] = pairs.size();
      report["top_n_per_cloud"] = cfg.top_n;
      report["score_normalization"] = "per-cloud min-max to [0, 1] before pooling";
      const std::string provenance = "fit: " + std::to_string(pairs.size()) + " clouds, top-" +
                                     std::to_string(cfg.top_n) + ", alpha " + format_double(cfg.alpha);
      out << report.dump(2) << '\n';
      if (!cfg.output.empty()) {
        const auto set = result.to_coefficient_set(provenance);
        detail::emit(cfg.output, out, [&](std::ostream& os) { write_coefficients(os, set); });
      }
      out.flush();
      if (!out) throw Error("failed writing to standard output");
    } else if (*predict) {
      const auto config = cfg.feature_config();
      const auto coeffs = detail::resolve_coefficients(cfg, coeff_path);
      const auto cloud = detail::read_cloud(cloud_path, cfg.normalize);
      const auto scores = predict_scores(extract_features(cloud, config), coeffs);
      detail::emit(cfg.output, out, [&](std::ostream& os) { write_scores(os, scores); });
    } else if (*attack) {
      const auto config = cfg.feature_config();
      const auto original = detail::read_cloud(cloud_path, false);
      AttackResult result;
      if (cfg.random) {
        result = random_drop(original, cfg.top_n, cfg.seed);
      } else {
        const auto coeffs = detail::resolve_coefficients(cfg, coeff_path);
        const auto analysed = cfg.normalize ? normalize_cloud(original) : original;
        gspdrop::detail::check_drop_count(original, cfg.top_n);
        // Features come from the (optionally normalized) copy; survivors keep
        // their original coordinates.
        result = gspdrop::drop_attack(original, extract_features(analysed, config), coeffs, cfg.top_n);
      }
      if (!cfg.output.empty()) {
        detail::emit(cfg.output, out, [&](std::ostream& os) { write_xyz_rows(os, result.retained_points); });
      }
      out << attack_report_json(result).dump(2) << '\n';
      out.flush();
      if (!out) throw Error("failed writing to standard output");
    } else if (*overlap_cmd) {
      const auto a = detail::read_scores(scores_a, std::nullopt);
      const auto b = detail::read_scores(scores_b, a.size());
      std::ostringstream table;
      table << "N,overlap_percent\n";
      for (Index n : cfg.top_n_sweep) {
        const auto top_a = rank_top_n(a, n);
        const auto top_b = rank_top_n(b, n);
        table << n << ',' << format_double(overlap(top_a, top_b)) << '\n';
      }
      detail::emit(cfg.output, out, [&](std::ostream& os) { os << table.str(); });
    } else if (*normalize) {
      const auto cloud = detail::read_cloud(cloud_path, true);
      detail::emit(cfg.output, out, [&](std::ostream& os) { write_xyz(os, cloud); });
    } else if (*presets) {
      if (cfg.preset.empty()) {
        detail::emit(cfg.output, out, [&](std::ostream& os) {
          for (const auto& p : bundled_presets()) os << p.name << '\n';
        });
      } else {
        const auto& p = preset(cfg.preset);
        detail::emit(cfg.output, out, [&](std::ostream& os) { write_coefficients(os, p.coefficients); });
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gspdrop::cli

#endif  // GSPDROP_TOOLS_APP_HPP
