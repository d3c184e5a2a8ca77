// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gspdrop/gspdrop.hpp"
#include "support/naive_oracle.hpp"
#include "support/ols_oracle.hpp"
#include "support/shapes.hpp"

using namespace gspdrop;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome feature_oracle() {
  Outcome o;
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index n = 8 + static_cast<Index>(seed % 9);  // 8..16
    const auto cloud = fixtures::random_cube_cloud(n, 500 + seed);
    const Index k = std::min<Index>(4, n - 1);
    FeatureConfig config;
    config.k = k;
    config.gamma = 0.5;
    config.ball_radius = 0.4;
    const auto fast = extract_features(cloud, config);
    const auto slow = fixtures::naive_features(cloud, k, std::nullopt, 0.5, 0.4);
    worst = std::max(worst, (fast.values() - slow).cwiseAbs().maxCoeff());
  }
  const double elapsed = seconds_since(start);
  require(o, worst <= 1e-9, "max abs deviation " + fmt(worst));
  require(o, elapsed < 5.0, "runtime " + fmt(elapsed) + " s");
  o.detail = o.pass ? "max abs deviation " + fmt(worst) + ", " + fmt(elapsed) + " s" : o.detail;
  return o;
}

Outcome graph_properties() {
  Outcome o;
  double row_err = 0.0, min_quad = std::numeric_limits<double>::infinity(), ld_err = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto cloud = fixtures::random_cube_cloud(64, 1000 + seed);
    const auto g = build_knn_graph(cloud, 10);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(64);
    row_err = std::max(row_err, (g.transition_apply(ones) - ones).cwiseAbs().maxCoeff());

    const Eigen::SparseMatrix<double> l = g.laplacian_matrix();
    const Eigen::SparseMatrix<double> w = g.adjacency_matrix();
    const Eigen::MatrixXd dense_l(l), dense_w(w);
    Eigen::MatrixXd d_minus_w = -dense_w;
    for (Index i = 0; i < 64; ++i) d_minus_w(i, i) += g.degrees()[i];
    ld_err = std::max(ld_err, (dense_l - d_minus_w).cwiseAbs().maxCoeff());

    Rng rng(seed);
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd x(64);
      for (Index i = 0; i < 64; ++i) x[i] = rng.normal();
      min_quad = std::min(min_quad, x.dot(g.laplacian_apply(x)));
    }
  }
  require(o, row_err <= 1e-12, "transition row-sum error " + fmt(row_err));
  require(o, min_quad >= -1e-10, "min x^T L x " + fmt(min_quad));
  require(o, ld_err == 0.0, "L - (D - W) max abs " + fmt(ld_err));
  if (o.pass) o.detail = "row-sum error " + fmt(row_err) + ", min quadratic form " + fmt(min_quad);
  return o;
}

Outcome lpf_limits() {
  Outcome o;
  const auto cloud = fixtures::random_cube_cloud(64, 42);
  const auto g = build_knn_graph(cloud, 10);
  const auto identity = lpf_solve(g, cloud, LpfConfig(1e-15));
  const double id_err = (identity - cloud.coords()).cwiseAbs().maxCoeff();
  require(o, id_err <= 1e-10, "gamma=1e-15 deviation " + fmt(id_err));

  const auto small = fixtures::random_cube_cloud(10, 43);
  const auto complete = build_knn_graph(small, 9);
  const auto flat = lpf_solve(complete, small, LpfConfig(1e9));
  const double spread = (flat.colwise().maxCoeff() - flat.colwise().minCoeff()).maxCoeff();
  require(o, spread <= 1e-3, "gamma=1e9 spread " + fmt(spread));

  const auto q = lpf_solve(g, cloud, LpfConfig(0.5));
  const auto dense = fixtures::naive_graph(cloud, 10, std::nullopt);
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(64, 64) + 0.5 * dense.l;
  const Eigen::MatrixXd p = cloud.coords();
  double rel = 0.0;
  for (int c = 0; c < 3; ++c) rel = std::max(rel, (system * q.col(c) - p.col(c)).norm() / p.col(c).norm());
  require(o, rel <= 1e-8, "gamma=0.5 relative residual " + fmt(rel));
  if (o.pass) {
    o.detail = "identity error " + fmt(id_err) + ", flat spread " + fmt(spread) + ", residual " + fmt(rel);
  }
  return o;
}

constexpr std::array<double, 14> kPlanted{-46.5, 0.5, -0.3, 0.2, 0, 0, 0, 0, 3.8, 0.4, 0.01, -3.7, 10.5, 0.3};

Outcome regression_recovery() {
  Outcome o;
  const auto start = Clock::now();
  const auto d = fixtures::planted(10000, kPlanted, 0.01, 2026);
  const auto fit = fit_mlr(d.x, d.y);
  double coef_err = 0.0;
  for (std::size_t j = 0; j < 14; ++j) coef_err = std::max(coef_err, std::abs(fit.coefficients[j].value - kPlanted[j]));
  require(o, coef_err <= 1e-2, "max coefficient error " + fmt(coef_err));
  require(o, fit.r_squared >= 0.99, "R^2 " + fmt(fit.r_squared));

  std::array<int, 14> insignificant{};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto sample = fixtures::planted(10000, kPlanted, 0.01, 7000 + seed);
    const auto trial = fit_mlr(sample.x, sample.y);
    for (std::size_t j = 0; j < 14; ++j) {
      if (!trial.coefficients[j].significant) ++insignificant[j];
    }
  }
  int worst_zero = 100;
  for (std::size_t j = 0; j < 14; ++j) {
    if (kPlanted[j] == 0.0) worst_zero = std::min(worst_zero, insignificant[j]);
  }
  require(o, worst_zero >= 90, "a planted zero was insignificant in only " + std::to_string(worst_zero) + "/100 trials");

  const auto small = fixtures::planted(30, kPlanted, 0.5, 31);
  const auto ours = fit_mlr(small.x, small.y);
  const auto oracle = fixtures::closed_form_ols(small);
  double t_err = 0.0, p_err = 0.0;
  for (std::size_t j = 0; j < 14; ++j) {
    t_err = std::max(t_err, std::abs(ours.coefficients[j].t_stat - oracle.t[j]));
    p_err = std::max(p_err, std::abs(ours.coefficients[j].p_value - oracle.p[j]));
  }
  require(o, t_err <= 1e-9 && p_err <= 1e-9, "oracle t error " + fmt(t_err) + ", p error " + fmt(p_err));
  const double elapsed = seconds_since(start);
  require(o, elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
  if (o.pass) {
    o.detail = "coef error " + fmt(coef_err) + ", R^2 " + fmt(fit.r_squared) + ", worst zero insignificant " +
               std::to_string(worst_zero) + "/100, t/p error " + fmt(std::max(t_err, p_err)) + ", " + fmt(elapsed) +
               " s";
  }
  return o;
}

struct PresetRow {
  const char* name;
  std::array<double, 14> c;
  double r2;
};

// Published rows at printed precision, in the order c1..c14.
constexpr PresetRow kPublished[] = {
    {"pointnet-N50", {-38.043, 0.007, 0.005, -0.009, 0, 0, 0, 0, 4.659, 0.648, 0.011, -3.554, 12.309, 0.196}, 94.3},
    {"pointnet-N100", {-44.032, 0.007, 0.006, -0.008, 0, 0, 0, 0, 5.113, 0.636, 0.011, -3.139, 11.733, 0.164}, 94.2},
    {"pointnet-N150", {-42.295, 0.007, 0.006, -0.007, 0, 0, 0, 0, 4.904, 0.623, 0.010, -3.055, 11.470, 0.160}, 94.1},
    {"pointnet-N200", {-41.451, 0.007, 0.005, -0.007, 0, 0, 0, 0, 4.819, 0.611, 0.010, -2.969, 11.207, 0.153}, 93.9},
    {"pointnet2-N50", {-54.854, 0.009, 0.006, -0.007, 0, 0, 0, 8.859, 6.112, 0.649, 0.011, -2.665, 11.375, 0.122}, 94.3},
    {"pointnet2-N100", {-49.452, 0.008, 0.005, -0.007, 0, 0, 0, 6.851, 5.544, 0.636, 0.010, -2.908, 11.370, 0.148}, 94.2},
    {"pointnet2-N150", {-44.927, 0.008, -0.006, -0.008, 0, 0, 0, 3.120, 5.125, 0.624, 0.010, -3.067, 11.320, 0.161}, 94.1},
    {"pointnet2-N200", {-43.109, 0.007, 0.005, -0.007, 0, 0, 0, 2.489, 4.938, 0.612, 0.010, -3.057, 11.091, 0.163}, 93.9},
    {"dgcnn-N50", {-52.555, 0.006, 0.006, -0.008, 0, 0, 0, 10.169, 5.870, 0.648, 0.011, -3.058, 11.745, 0.157}, 94.4},
    {"dgcnn-N100", {-46.105, 0.006, 0.005, -0.007, 0, 0, 0, 4.473, 5.241, 0.636, 0.011, -3.257, 11.818, 0.177}, 94.3},
    {"dgcnn-N150", {-43.374, 0.007, 0.005, -0.007, 0, 0, 0, 3.352, 4.960, 0.623, 0.011, -3.179, 11.540, 0.173}, 94.2},
    {"dgcnn-N200", {-41.795, 0.006, 0.004, -0.007, 0, 0, 0, 3.585, 4.806, 0.610, 0.011, -3.153, 11.330, 0.174}, 94.0},
};

Outcome preset_fidelity() {
  Outcome o;
  for (const auto& row : kPublished) {
    const auto p = find_preset(row.name);
    if (!p) {
      require(o, false, std::string("missing preset ") + row.name);
      continue;
    }
    for (int j = 1; j <= 14; ++j) {
      require(o, p->coefficients.c(j) == row.c[static_cast<std::size_t>(j - 1)],
              std::string(row.name) + " c" + std::to_string(j) + " = " + fmt(p->coefficients.c(j)));
    }
    require(o, p->r_squared_percent && *p->r_squared_percent == row.r2, std::string(row.name) + " R^2");
  }
  for (const char* net : {"pointnet", "pointnet2", "dgcnn", "avg"}) {
    for (int n : {50, 100, 150, 200}) {
      const std::string name = std::string(net) + "-N" + std::to_string(n);
      require(o, find_preset(name).has_value() && find_preset(name)->top_n == n, "missing preset " + name);
    }
  }
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = extract_features(fixtures::random_shape_cloud(256, 60 + seed));
    const auto z = predict_scores(f, preset("pointnet-N150").coefficients);
    for (Index i = 0; i < f.rows(); ++i) {
      const auto r = f.row(i);
      const double eq = -42.295 * r[0] + 0.007 * r[1] + 0.006 * r[2] - 0.007 * r[3] + 4.904 * r[8] + 0.623 * r[9] +
                        0.010 * r[10] - 3.055 * r[11] + 11.470 * r[12] + 0.160 * r[13];
      worst = std::max(worst, std::abs(z[i] - eq));
    }
  }
  require(o, worst <= 1e-12, "pointnet-N150 equation deviation " + fmt(worst));
  if (o.pass) o.detail = "16 presets present, equation deviation " + fmt(worst);
  return o;
}

double population_sd(const Eigen::VectorXd& v) { return std::sqrt((v.array() - v.mean()).square().mean()); }

Outcome end_to_end_overlap() {
  Outcome o;
  const auto start = Clock::now();
  const auto& planted = preset("avg-N100").coefficients;
  constexpr Index kPoints = 1024, kTop = 200;
  std::vector<TrainingSample> pool;
  std::vector<FeatureMatrix> held_features;
  std::vector<ScoreVector> held_truth;
  for (std::uint64_t c = 0; c < 100; ++c) {
    const auto cloud = fixtures::random_shape_cloud(kPoints, 20000 + c);
    const auto f = extract_features(cloud);
    const double sd = population_sd(predict_scores(f, planted).values());
    const auto truth = synthetic_score_oracle(f, planted, 0.05 * sd, 30000 + c);
    if (c < 80) {
      const auto samples = select_top_targets(normalize_scores(truth), f, kTop);
      pool.insert(pool.end(), samples.begin(), samples.end());
    } else {
      held_features.push_back(f);
      held_truth.push_back(truth);
    }
  }
  auto mean_overlap = [&](const CoefficientSet& coeffs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < held_features.size(); ++i) {
      sum += overlap(rank_top_n(predict_scores(held_features[i], coeffs), kTop), rank_top_n(held_truth[i], kTop));
    }
    return sum / static_cast<double>(held_features.size());
  };
  const auto fit = fit_mlr(pool);
  const double mean = mean_overlap(fit.to_coefficient_set("fit on 80 synthetic clouds"));
  const double baseline = 100.0 * static_cast<double>(kTop) / static_cast<double>(kPoints);
  const double elapsed = seconds_since(start);
  if (mean < 50.0) {
    // Diagnostics only: the ranking ceiling of the planted model itself, and
    // the same pool refitted with an intercept to absorb each cloud's
    // min-max offset.
    FitOptions with_intercept;
    with_intercept.intercept = true;
    const double ceiling = mean_overlap(planted);
    const double intercept = mean_overlap(fit_mlr(pool, with_intercept).to_coefficient_set("diagnostic"));
    require(o, false, "mean overlap " + fmt(mean) + "% (training R^2 " + fmt(fit.r_squared) +
                          "; planted-model ceiling " + fmt(ceiling) + "%, with intercept " + fmt(intercept) + "%)");
  }
  require(o, mean - baseline >= 20.0, "margin over random " + fmt(mean - baseline));
  require(o, elapsed < 120.0, "runtime " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "mean top-200 overlap " + fmt(mean) + "% vs random " + fmt(baseline) + "%, " + fmt(elapsed) + " s";
  return o;
}

Outcome attack_pipeline() {
  Outcome o;
  const auto cloud = fixtures::random_shape_cloud(1024, 5150);
  const auto f = extract_features(cloud);
  const auto& coeffs = preset("avg-N100").coefficients;
  const auto result = drop_attack(cloud, f, coeffs, 100);
  require(o, result.retained_cloud().size() == 924, "retained " + std::to_string(result.retained_cloud().size()));

  auto base = result.dropped_indices;
  std::sort(base.begin(), base.end());
  for (double lambda : {1e-3, 0.5, 7.0, 1e3}) {
    auto scaled = drop_attack(cloud, f, coeffs.scaled(lambda), 100).dropped_indices;
    std::sort(scaled.begin(), scaled.end());
    require(o, scaled == base, "dropped set changed under rescaling by " + fmt(lambda));
  }

  const auto ten = fixtures::random_cube_cloud(10, 1);
  std::array<int, 10> hits{};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    ++hits[static_cast<std::size_t>(random_drop(ten, 1, seed).dropped_indices[0])];
  }
  double worst = 0.0;
  for (int h : hits) worst = std::max(worst, std::abs(h / 1000.0 - 0.1));
  require(o, worst <= 0.03, "random_drop frequency deviation " + fmt(worst));
  if (o.pass) o.detail = "924 points retained, rescaling invariant, max frequency deviation " + fmt(worst);
  return o;
}

Outcome extraction_speed() {
  Outcome o;
  const auto cloud = fixtures::random_shape_cloud(1024, 8);
  FeatureConfig config;
  config.k = 10;
  (void)extract_features(cloud, config);
  std::vector<double> times;
  for (int r = 0; r < 5; ++r) {
    const auto start = Clock::now();
    const auto f = extract_features(cloud, config);
    times.push_back(seconds_since(start));
    require(o, f.rows() == 1024, "row count");
  }
  std::sort(times.begin(), times.end());
  const double median_ms = 1e3 * times[2];
  require(o, median_ms < 100.0, "median extraction " + fmt(median_ms) + " ms");
  if (o.pass) o.detail = "median extraction " + fmt(median_ms) + " ms";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 feature oracle equivalence", feature_oracle},
      {"2 graph properties", graph_properties},
      {"3 low-pass filter limits", lpf_limits},
      {"4 regression recovery", regression_recovery},
      {"5 preset fidelity", preset_fidelity},
      {"6 end-to-end overlap", end_to_end_overlap},
      {"7 attack pipeline", attack_pipeline},
      {"8 extraction performance", extraction_speed},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
