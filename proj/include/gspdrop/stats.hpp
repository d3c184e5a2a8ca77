// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_STATS_HPP
#define GSPDROP_STATS_HPP

#include <algorithm>
#include <cmath>
#include <limits>

#include "gspdrop/error.hpp"

namespace gspdrop::stats {

namespace detail {

// Stirling correction lgamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2], x >= 10.
inline double stirling_correction(double x) {
  const double x2 = x * x;
  return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2) / x;
}

}  // namespace detail

/// ln B(a, b). When one argument is large the ratio Gamma(big)/Gamma(big+small)
/// is formed from Stirling terms so the big lgamma values never cancel.
inline double log_beta(double a, double b) {
  const double small = std::min(a, b);
  const double big = std::max(a, b);
  if (big < 10.0) return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double sum = big + small;
  // lgamma(sum) - lgamma(big)
  const double ratio = (big - 0.5) * std::log1p(small / big) + small * std::log(sum) - small +
                       detail::stirling_correction(sum) - detail::stirling_correction(big);
  if (small >= 10.0) {
    // All three arguments large: expand lgamma(small) the same way.
    const double lg_small = (small - 0.5) * std::log(small) - small +
                            0.5 * std::log(2.0 * 3.14159265358979323846) +
                            detail::stirling_correction(small);
    return lg_small - ratio;
  }
  return std::lgamma(small) - ratio;
}

namespace detail {

// Continued fraction for I_x(a, b), modified Lentz evaluation.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 100000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

// x^a (1-x)^b / (a B(a,b)), with ln(1-x) supplied by the caller so it can be
// computed from 1-x directly when that is the more accurate input.
inline double beta_prefix(double a, double b, double log_x, double log_1mx) {
  return std::exp(a * log_x + b * log_1mx - log_beta(a, b)) / a;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
/// `one_minus_x` may be supplied when 1 - x is known more accurately than x.
inline double incomplete_beta(double a, double b, double x, double one_minus_x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (one_minus_x == 0.0) return 1.0;
  // Take the logarithm of whichever of x, 1 - x is far from 1 through log1p
  // so a large exponent does not amplify its rounding error.
  const double log_x = one_minus_x < 0.5 ? std::log1p(-one_minus_x) : std::log(x);
  const double log_1mx = x < 0.5 ? std::log1p(-x) : std::log(one_minus_x);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return detail::beta_prefix(a, b, log_x, log_1mx) * detail::beta_continued_fraction(a, b, x);
  }
  return 1.0 - detail::beta_prefix(b, a, log_1mx, log_x) *
                   detail::beta_continued_fraction(b, a, one_minus_x);
}

inline double incomplete_beta(double a, double b, double x) { return incomplete_beta(a, b, x, 1.0 - x); }

/// Two-sided tail probability P(|T| >= |t|) for Student's t with `dof` degrees of
/// freedom: I_{dof/(dof+t^2)}(dof/2, 1/2).
inline double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw Error("Student t needs positive degrees of freedom");
  if (std::isnan(t)) throw Error("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  const double denom = dof + t2;
  const double p = incomplete_beta(0.5 * dof, 0.5, dof / denom, t2 / denom);
  return std::clamp(p, 0.0, 1.0);
}

/// CDF of Student's t.
inline double student_t_cdf(double t, double dof) {
  const double tail = 0.5 * student_t_two_sided_p(t, dof);
  return t >= 0.0 ? 1.0 - tail : tail;
}

}  // namespace gspdrop::stats

#endif  // GSPDROP_STATS_HPP
