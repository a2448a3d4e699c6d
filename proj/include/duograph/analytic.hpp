#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "duograph/errors.hpp"

namespace duograph {

/// h(b) = (1 - e^{-l1 b})(1 - e^{-l2 b}) - b and its first two derivatives.
/// All expressions are symmetric in (l1, l2).
struct HDerivatives {
  double h = 0.0;
  double hp = 0.0;
  double hpp = 0.0;
};

inline HDerivatives h_eval(double lambda1, double lambda2, double beta) {
  const double e1 = std::exp(-lambda1 * beta);
  const double e2 = std::exp(-lambda2 * beta);
  const double e12 = e1 * e2;
  HDerivatives d;
  d.h = (1.0 - e1) * (1.0 - e2) - beta;
  d.hp = lambda1 * e1 + lambda2 * e2 - (lambda1 + lambda2) * e12 - 1.0;
  const double sum = lambda1 + lambda2;
  d.hpp = sum * sum * e12 - lambda1 * lambda1 * e1 - lambda2 * lambda2 * e2;
  return d;
}

/// The giant-fraction value: the largest root of h on [0, 1), with root-count
/// and root-search diagnostics. h starts at h(0) = 0 with h'(0) = -1, has at
/// most two strictly positive roots, and its stationary structure follows
/// from h'' changing sign exactly once (positive then negative).
struct BetaResult {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double beta = 0.0;
  int positive_root_count = 0;  // 0, 1 (tangency) or 2
  double residual = 0.0;        // |h(beta)|
  double local_max_location = 0.0;
  double local_max_value = 0.0;
};

namespace detail {

inline void check_intensity(double l, const char* who) {
  if (!std::isfinite(l) || l < 0.0)
    throw parameter_error(std::string(who) + ": lambda must be finite and non-negative");
}

/// Bisects f over [lo, hi] assuming f(lo) > 0 >= f(hi); returns the midpoint
/// of the final bracket.
template <typename F>
double bisect_down(F&& f, double lo, double hi, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline BetaResult beta(double lambda1, double lambda2, double tol = 1e-12) {
  detail::check_intensity(lambda1, "beta");
  detail::check_intensity(lambda2, "beta");
  if (!(tol > 0.0)) throw parameter_error("beta: tol must be positive");
  // Evaluate on the sorted pair so beta(a, b) and beta(b, a) are bit-equal.
  const double l1 = std::min(lambda1, lambda2);
  const double l2 = std::max(lambda1, lambda2);
  BetaResult res;
  res.lambda1 = lambda1;
  res.lambda2 = lambda2;
  if (l1 == 0.0) return res;  // one layer empty: h(b) < 0 for all b > 0

  auto hp = [&](double b) { return h_eval(l1, l2, b).hp; };
  auto hpp = [&](double b) { return h_eval(l1, l2, b).hpp; };

  // h'' is positive then negative; its zero m is where h' peaks.
  const double m =
      hpp(1.0) > 0.0 ? 1.0 : detail::bisect_down(hpp, 0.0, 1.0, tol);
  if (hp(m) <= 0.0) {
    // h' never positive: h strictly decreasing, no positive root.
    res.local_max_location = m;
    res.local_max_value = h_eval(l1, l2, m).h;
    return res;
  }
  // Largest zero z2 of h' (sign pattern of h' over [m, 1] is +, -): the
  // local maximum of h. h'(1) < 0 always since x e^{-x} <= 1/e.
  const double z2 = detail::bisect_down(hp, m, 1.0, tol);
  const double hmax = h_eval(l1, l2, z2).h;
  res.local_max_location = z2;
  res.local_max_value = hmax;
  const double tangency_band = 10.0 * tol;
  if (hmax > tangency_band) {
    auto h = [&](double b) { return h_eval(l1, l2, b).h; };
    res.beta = detail::bisect_down(h, z2, 1.0, tol);
    res.positive_root_count = 2;
  } else if (hmax >= -tangency_band) {
    res.beta = z2;
    res.positive_root_count = 1;
  } else {
    return res;
  }
  res.residual = std::fabs(h_eval(l1, l2, res.beta).h);
  return res;
}

/// Probabilities of the height-d red-blue binary witness events:
/// q_0 = 1, q_{d+1} = (1 - e^{-l1 q_d})(1 - e^{-l2 q_d}).
inline std::vector<double> bd_prob(double lambda1, double lambda2,
                                   std::uint32_t d_max) {
  detail::check_intensity(lambda1, "bd_prob");
  detail::check_intensity(lambda2, "bd_prob");
  std::vector<double> q{1.0};
  q.reserve(d_max + 1);
  for (std::uint32_t d = 0; d < d_max; ++d) {
    const double prev = q.back();
    q.push_back((1.0 - std::exp(-lambda1 * prev)) * (1.0 - std::exp(-lambda2 * prev)));
  }
  return q;
}

namespace detail {

/// True when h has a strictly positive local maximum, i.e. the largest root
/// of h is strictly positive.
inline bool supercritical(double l1, double l2, double tol = 1e-13) {
  const BetaResult r = beta(l1, l2, tol);
  return r.local_max_value > 0.0;
}

}  // namespace detail

inline constexpr double kCriticalSearchCap = 1e6;

/// Smallest lambda2 with beta(lambda1, lambda2) > 0, or nullopt when no
/// finite threshold exists (lambda1 <= 1: the limit equation b = 1-e^{-l1 b}
/// is tangent at 0). At the returned point h and h' share a root.
inline std::optional<double> critical_lambda2(double lambda1, double tol = 1e-8) {
  if (!std::isfinite(lambda1) || lambda1 <= 0.0)
    throw parameter_error("critical_lambda2: lambda1 must be positive");
  if (!(tol > 0.0)) throw parameter_error("critical_lambda2: tol must be positive");
  if (lambda1 <= 1.0) return std::nullopt;
  double hi = 1.0;
  while (!detail::supercritical(lambda1, hi)) {
    hi *= 2.0;
    if (hi > kCriticalSearchCap) return std::nullopt;
  }
  double lo = hi * 0.5 >= 1.0 ? hi * 0.5 : 0.0;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::supercritical(lambda1, mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

struct CurvePoint {
  double lambda1 = 0.0;
  double lambda2_critical = 0.0;
  double beta_at_critical = 0.0;  // the double root of h at the threshold
};

/// Threshold curve sampled on a lambda1 grid. The double root at each point
/// is the local-max location of h at (lambda1, lambda2_critical).
inline std::vector<CurvePoint> trace_curve(double lambda1_min, double lambda1_max,
                                           double step, double tol = 1e-8) {
  if (!(lambda1_min > 1.0) || !(lambda1_max > lambda1_min))
    throw parameter_error("trace_curve: need 1 < lambda1_min < lambda1_max");
  if (!(step > 0.0)) throw parameter_error("trace_curve: step must be positive");
  std::vector<CurvePoint> out;
  for (double l1 = lambda1_min; l1 <= lambda1_max + 1e-12; l1 += step) {
    const auto l2c = critical_lambda2(l1, tol);
    if (!l2c)
      throw numeric_error("trace_curve: no finite threshold at lambda1 = " +
                          std::to_string(l1));
    CurvePoint p;
    p.lambda1 = l1;
    p.lambda2_critical = *l2c;
    p.beta_at_critical = beta(l1, *l2c).local_max_location;
    out.push_back(p);
  }
  return out;
}

struct DiagonalCritical {
  double lambda_star = 0.0;
  double beta_star = 0.0;
};

/// Critical intensity on the diagonal lambda1 = lambda2 and the height of
/// the jump (the double root of h at the critical point).
inline DiagonalCritical diagonal_critical(double tol = 1e-6) {
  if (!(tol > 0.0)) throw parameter_error("diagonal_critical: tol must be positive");
  double lo = 1.0, hi = 8.0;
  if (!detail::supercritical(hi, hi))
    throw numeric_error("diagonal_critical: search bracket failed");
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::supercritical(mid, mid))
      hi = mid;
    else
      lo = mid;
  }
  DiagonalCritical res;
  res.lambda_star = 0.5 * (lo + hi);
  res.beta_star = beta(hi, hi).local_max_location;
  return res;
}

/// Checks the supercritical inequality lambda_i (1 - e^{-lambda_{3-i} beta}) > 1
/// for i = 1, 2; vacuously true when beta = 0.
inline bool epsexist_check(double lambda1, double lambda2) {
  detail::check_intensity(lambda1, "epsexist_check");
  detail::check_intensity(lambda2, "epsexist_check");
  const BetaResult r = beta(lambda1, lambda2);
  if (r.beta <= 0.0) return true;
  const double lhs1 = lambda1 * (1.0 - std::exp(-lambda2 * r.beta));
  const double lhs2 = lambda2 * (1.0 - std::exp(-lambda1 * r.beta));
  return lhs1 > 1.0 && lhs2 > 1.0;
}

}  // namespace duograph
