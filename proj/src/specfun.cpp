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

#include "logcalib/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace logcalib {
namespace {

void reject_nan(double x, const char* what) {
  if (std::isnan(x)) throw std::domain_error(std::string(what) + ": NaN input");
}

// Series expansion of P(a, x), valid and fast for x < a + 1.
double reg_gamma_lower_series(double a, double x) {
  if (x == 0.0) return 0.0;
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz), valid for x >= a + 1.
double reg_gamma_upper_cf(double a, double x) {
  constexpr double kFpMin = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-17) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

double gamma_log_pdf(double a, double x) {
  return (a - 1.0) * std::log(x) - x - log_gamma(a);
}

}  // namespace

double log_gamma(double x) {
  reject_nan(x, "log_gamma");
  if (x <= 0.0) throw std::domain_error("log_gamma: requires x > 0");
  return std::lgamma(x);
}

double reg_gamma_upper(double a, double x) {
  reject_nan(a, "reg_gamma_upper");
  reject_nan(x, "reg_gamma_upper");
  if (a <= 0.0) throw std::domain_error("reg_gamma_upper: requires a > 0");
  if (x < 0.0) throw std::domain_error("reg_gamma_upper: requires x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - reg_gamma_lower_series(a, x);
  return reg_gamma_upper_cf(a, x);
}

double inv_reg_gamma_lower(double p, double a) {
  reject_nan(p, "inv_reg_gamma_lower");
  reject_nan(a, "inv_reg_gamma_lower");
  if (a <= 0.0) throw std::domain_error("inv_reg_gamma_lower: requires a > 0");
  if (p < 0.0 || p >= 1.0)
    throw std::domain_error("inv_reg_gamma_lower: requires p in [0, 1)");
  if (p == 0.0) return 0.0;

  const auto lower = [a](double x) { return 1.0 - reg_gamma_upper(a, x); };

  // Bracket the root.
  double lo = 0.0;
  double hi = a + 1.0;
  while (lower(hi) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("inv_reg_gamma_lower: no bracket");
  }

  // Initial guess: for small a the mass is packed near 0; start from the
  // crude inversion of the leading series term P(a,x) ~ x^a / (a Gamma(a)).
  double x;
  if (a < 1.0) {
    x = std::exp((std::log(p) + log_gamma(a + 1.0)) / a);
  } else {
    x = a * std::pow(1.0 - 1.0 / (9.0 * a) +
                         std_normal_quantile(p) / (3.0 * std::sqrt(a)),
                     3.0);
  }
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double err = lower(x) - p;
    if (std::abs(err) <= 1e-13) return x;
    if (err > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double logpdf = gamma_log_pdf(a, x);
    double next = x - err * std::exp(-logpdf);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return x;
}

double std_normal_cdf(double x) {
  reject_nan(x, "std_normal_cdf");
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double std_normal_quantile(double p) {
  reject_nan(p, "std_normal_quantile");
  if (p <= 0.0 || p >= 1.0)
    throw std::domain_error("std_normal_quantile: requires p in (0, 1)");

  // Acklam's rational approximation, then Halley refinement against erfc.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double e = std_normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace logcalib
