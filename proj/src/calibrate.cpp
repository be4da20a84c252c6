// Copyright 2026 The logcalib Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "logcalib/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace logcalib {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, flm);
  const double right = simpson(f, m, fm, b, fb, frm);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol)
    return left + right + err / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                              depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, fm);
  // Seed with a few panels so a locally flat integrand cannot fool the
  // error estimate.
  double total = 0.0;
  const int kPanels = 16;
  double x0 = a;
  double fx0 = fa;
  for (int i = 1; i <= kPanels; ++i) {
    const double x1 = a + (b - a) * i / kPanels;
    const double fx1 = f(x1);
    const double xm = 0.5 * (x0 + x1);
    const double fxm = f(xm);
    const double panel = simpson(f, x0, fx0, x1, fx1, fxm);
    total += adaptive_simpson_rec(f, x0, fx0, x1, fx1, xm, fxm, panel,
                                  tol / kPanels, 48);
    x0 = x1;
    fx0 = fx1;
  }
  (void)whole;
  return total;
}

}  // namespace

void PrivacyBudget::validate() const {
  if (std::isnan(epsilon) || epsilon < 0.0)
    throw std::domain_error("PrivacyBudget: epsilon must be >= 0");
  if (std::isnan(delta) || delta < 0.0 || delta >= 1.0)
    throw std::domain_error("PrivacyBudget: delta must be in [0, 1)");
}

void SensitivitySpec::validate() const {
  if (std::isnan(delta_q) || delta_q < 0.0)
    throw std::domain_error("SensitivitySpec: delta_q must be >= 0");
  if (std::isnan(norm_order) || norm_order < 1.0)
    throw std::domain_error("SensitivitySpec: norm_order must be >= 1");
  if (dimension < 1)
    throw std::domain_error("SensitivitySpec: dimension must be positive");
}

double threshold_t(const NoiseFamily& family, double epsilon, double delta_q,
                   double scale, const CalibrationOptions& opts) {
  if (!(delta_q > 0.0))
    throw std::domain_error("threshold_t: requires delta_q > 0");
  if (!(scale > 0.0)) throw std::domain_error("threshold_t: requires scale > 0");
  if (std::isnan(epsilon) || epsilon < 0.0)
    throw std::domain_error("threshold_t: requires epsilon >= 0");

  if (auto t = family.analytic_threshold(epsilon, delta_q, scale)) return *t;

  const double a = family.support_radius();
  const double s = scale;
  const auto crit = [&](double z) {
    // psi(z/s) - psi((z - delta)/s) - epsilon; -inf once the shifted density
    // vanishes, +inf once the unshifted one does.
    const double lhs = family.psi(z / s);
    const double rhs = family.psi((z - delta_q) / s);
    if (std::isinf(rhs)) return -kInf;
    return lhs - rhs - epsilon;
  };

  const double tol =
      opts.threshold_abs_tol * std::max({1.0, delta_q, s});
  double lo = delta_q / 2.0;  // crit(lo) = -epsilon <= 0 by evenness
  double hi;
  if (std::isinf(a)) {
    if (family.mlr_limit(delta_q, s) <= epsilon) return kInf;
    hi = std::max({1.0, delta_q, s});
    int i = 0;
    while (crit(hi) <= 0.0) {
      hi *= 2.0;
      if (++i > opts.max_doublings) return kInf;
    }
  } else {
    hi = a * s;
    const double probe = hi - std::max(tol, hi * 1e-14);
    if (probe <= lo || crit(probe) <= 0.0) return a * s;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (crit(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double privacy_profile(const NoiseFamily& family, double epsilon,
                       double delta_q, double scale,
                       const CalibrationOptions& opts) {
  if (!(scale > 0.0))
    throw std::domain_error("privacy_profile: requires scale > 0");
  if (std::isnan(delta_q) || delta_q < 0.0)
    throw std::domain_error("privacy_profile: requires delta_q >= 0");
  if (delta_q == 0.0) return 0.0;

  const double a = family.support_radius();
  if (!std::isinf(a) && delta_q >= 2.0 * a * scale) return 1.0;

  const double t = threshold_t(family, epsilon, delta_q, scale, opts);
  if (std::isinf(t)) return 0.0;
  if (!std::isinf(a) && t >= a * scale)
    return clamp01(family.cdf(delta_q / scale - a));
  return clamp01(family.cdf((delta_q - t) / scale) -
                 std::exp(epsilon) * family.cdf(-t / scale));
}

double oracle_delta(const NoiseFamily& family, double epsilon, double delta_q,
                    double scale, double tol) {
  if (!(scale > 0.0))
    throw std::domain_error("oracle_delta: requires scale > 0");
  if (std::isnan(delta_q) || delta_q < 0.0)
    throw std::domain_error("oracle_delta: requires delta_q >= 0");
  if (delta_q == 0.0) return 0.0;

  const double s = scale;
  const double e_eps = std::exp(epsilon);
  const auto integrand = [&](double x) {
    const double shifted = family.density((x - delta_q) / s) / s;
    const double base = family.density(x / s) / s;
    return std::max(0.0, shifted - e_eps * base);
  };

  // The integrand vanishes left of delta_q / 2 by symmetry of the densities.
  const double lo = delta_q / 2.0;
  double hi;
  const double a = family.support_radius();
  if (std::isinf(a)) {
    hi = delta_q + s * family.quantile(1.0 - 1e-14);
  } else {
    hi = delta_q + a * s;
  }
  if (hi <= lo) return 0.0;
  return clamp01(adaptive_simpson(integrand, lo, hi, tol));
}

namespace {

CalibrationResult result_at(const NoiseFamily& family,
                            const PrivacyBudget& budget, double delta_q,
                            double scale, int iterations,
                            const CalibrationOptions& opts) {
  CalibrationResult res;
  res.scale = scale;
  res.threshold = threshold_t(family, budget.epsilon, delta_q, scale, opts);
  res.achieved_delta =
      privacy_profile(family, budget.epsilon, delta_q, scale, opts);
  res.converged = true;
  res.iterations = iterations;
  return res;
}

double laplace_closed_form(double epsilon, double delta, double delta_q) {
  return delta_q / (epsilon - 2.0 * std::log1p(-delta));
}

double logistic_closed_form(double epsilon, double delta, double delta_q) {
  const double num =
      std::exp(epsilon / 2.0) +
      std::sqrt(delta * (std::exp(epsilon) + delta - 1.0));
  return delta_q / (2.0 * std::log(num / (1.0 - delta)));
}

// delta = 0: feasibility rests on the MLR limit alone; the minimal scale is
// the smallest s with mlr_limit(delta_q, s) <= epsilon.
CalibrationResult pure_dp_scale(const NoiseFamily& family,
                                const PrivacyBudget& budget, double delta_q,
                                const CalibrationOptions& opts) {
  if (!std::isinf(family.support_radius()))
    throw CalibrationError(
        "delta = 0 is unachievable for a finite-support family");
  if (std::isinf(family.mlr_limit(delta_q, 1.0)))
    throw CalibrationError(
        "delta = 0 is unachievable: family is MLR-unbounded");
  if (budget.epsilon == 0.0)
    throw std::domain_error("scale_for_budget: (epsilon, delta) = (0, 0)");
  // mlr_limit is non-increasing in s; bracket and bisect.
  double hi = std::max(1.0, delta_q);
  int iters = 0;
  while (family.mlr_limit(delta_q, hi) > budget.epsilon) {
    hi *= 2.0;
    if (++iters > opts.max_doublings)
      throw CalibrationError("pure-DP scale bracket expansion failed");
  }
  double lo = hi;
  while (lo > 1e-300 && family.mlr_limit(delta_q, lo) <= budget.epsilon) {
    lo /= 2.0;
    ++iters;
  }
  while (hi - lo > opts.scale_rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (family.mlr_limit(delta_q, mid) <= budget.epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++iters;
  }
  return result_at(family, budget, delta_q, hi, iters, opts);
}

}  // namespace

CalibrationResult scale_for_budget(const NoiseFamily& family,
                                   const PrivacyBudget& budget, double delta_q,
                                   const CalibrationOptions& opts) {
  budget.validate();
  if (std::isnan(delta_q) || delta_q < 0.0)
    throw std::domain_error("scale_for_budget: requires delta_q >= 0");
  if (budget.epsilon == 0.0 && budget.delta == 0.0)
    throw std::domain_error("scale_for_budget: (epsilon, delta) = (0, 0)");
  if (delta_q == 0.0) {
    CalibrationResult res;
    res.scale = 0.0;
    res.threshold = kInf;
    res.achieved_delta = 0.0;
    res.converged = true;
    return res;
  }

  if (!opts.force_numeric) {
    if (family.kind() == FamilyKind::kSubbotin && family.shape() == 1.0) {
      const double s =
          laplace_closed_form(budget.epsilon, budget.delta, delta_q);
      return result_at(family, budget, delta_q, s, 0, opts);
    }
    if (family.kind() == FamilyKind::kLogistic) {
      const double s =
          logistic_closed_form(budget.epsilon, budget.delta, delta_q);
      return result_at(family, budget, delta_q, s, 0, opts);
    }
  }

  if (budget.delta == 0.0) return pure_dp_scale(family, budget, delta_q, opts);

  const auto profile = [&](double s) {
    return privacy_profile(family, budget.epsilon, delta_q, s, opts);
  };

  int iters = 0;
  double hi = delta_q * (1.0 + 1.0 / std::max(budget.epsilon, 1e-6));
  while (profile(hi) > budget.delta) {
    hi *= 2.0;
    if (++iters > opts.max_doublings)
      throw CalibrationError("scale bracket expansion failed: budget appears "
                             "unachievable for this family");
  }
  double lo = hi / 2.0;
  while (profile(lo) <= budget.delta) {
    lo /= 2.0;
    ++iters;
    if (lo < 1e-300) {
      // Any positive scale meets the budget.
      return result_at(family, budget, delta_q, lo, iters, opts);
    }
  }
  while (hi - lo > opts.scale_rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (profile(mid) <= budget.delta) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++iters;
  }
  return result_at(family, budget, delta_q, hi, iters, opts);
}

CalibrationResult gaussian_scale(const PrivacyBudget& budget, double delta_q,
                                 const CalibrationOptions& opts) {
  budget.validate();
  if (budget.delta <= 0.0)
    throw std::domain_error(
        "gaussian_scale: the Gaussian mechanism cannot achieve delta = 0");
  if (!(delta_q > 0.0))
    throw std::domain_error("gaussian_scale: requires delta_q > 0");
  CalibrationOptions tight = opts;
  tight.scale_rel_tol = std::min(opts.scale_rel_tol, 1e-12);
  return scale_for_budget(NoiseFamily::Gaussian(), budget, delta_q, tight);
}

}  // namespace logcalib
