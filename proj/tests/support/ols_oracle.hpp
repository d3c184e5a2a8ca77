// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_TESTS_OLS_ORACLE_HPP
#define GSPDROP_TESTS_OLS_ORACLE_HPP

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "gspdrop/random.hpp"
#include "gspdrop/types.hpp"

namespace gspdrop::fixtures {

struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

inline Dataset planted(Index m, const std::array<double, 14>& coef, double noise, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d{Eigen::MatrixXd(m, 14), Eigen::VectorXd(m)};
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < 14; ++j) d.x(i, j) = rng.normal();
  }
  for (Index i = 0; i < m; ++i) {
    double s = 0.0;
    for (Index j = 0; j < 14; ++j) s += coef[static_cast<std::size_t>(j)] * d.x(i, j);
    d.y[i] = s + noise * rng.normal();
  }
  return d;
}

// Closed-form OLS: beta = (X^T X)^-1 X^T y via Gauss-Jordan in long double,
// p-values from Boost's Student t.
struct OracleFit {
  std::vector<double> coef, se, t, p;
};

inline OracleFit closed_form_ols(const Dataset& d) {
  const Index m = d.x.rows(), p = d.x.cols();
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  LMat xtx = LMat::Zero(p, 2 * p);
  for (Index a = 0; a < p; ++a) {
    for (Index b = 0; b < p; ++b) {
      long double s = 0;
      for (Index i = 0; i < m; ++i) s += static_cast<long double>(d.x(i, a)) * d.x(i, b);
      xtx(a, b) = s;
    }
    xtx(a, p + a) = 1;
  }
  for (Index c = 0; c < p; ++c) {
    Index pivot = c;
    for (Index r = c + 1; r < p; ++r) {
      if (std::abs(xtx(r, c)) > std::abs(xtx(pivot, c))) pivot = r;
    }
    xtx.row(c).swap(xtx.row(pivot));
    xtx.row(c) /= xtx(c, c);
    for (Index r = 0; r < p; ++r) {
      if (r != c) xtx.row(r) -= xtx(r, c) * xtx.row(c);
    }
  }
  const LMat inv = xtx.rightCols(p);
  std::vector<long double> beta(static_cast<std::size_t>(p), 0);
  for (Index a = 0; a < p; ++a) {
    for (Index i = 0; i < m; ++i) {
      long double xty = 0;
      for (Index b = 0; b < p; ++b) xty += inv(a, b) * static_cast<long double>(d.x(i, b));
      beta[static_cast<std::size_t>(a)] += xty * d.y[i];
    }
  }
  long double rss = 0;
  for (Index i = 0; i < m; ++i) {
    long double fit = 0;
    for (Index b = 0; b < p; ++b) fit += beta[static_cast<std::size_t>(b)] * d.x(i, b);
    rss += (d.y[i] - fit) * (d.y[i] - fit);
  }
  const double dof = static_cast<double>(m - p);
  const long double s2 = rss / dof;
  boost::math::students_t dist(dof);
  OracleFit out;
  for (Index a = 0; a < p; ++a) {
    const double c = static_cast<double>(beta[static_cast<std::size_t>(a)]);
    const double se = static_cast<double>(std::sqrt(s2 * inv(a, a)));
    out.coef.push_back(c);
    out.se.push_back(se);
    out.t.push_back(c / se);
    out.p.push_back(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(c / se))));
  }
  return out;
}

}  // namespace gspdrop::fixtures

#endif  // GSPDROP_TESTS_OLS_ORACLE_HPP
