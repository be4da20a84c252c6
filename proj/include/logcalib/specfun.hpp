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

#ifndef LOGCALIB_SPECFUN_HPP_
#define LOGCALIB_SPECFUN_HPP_

namespace logcalib {

// Natural log of the gamma function for x > 0.
double log_gamma(double x);

// Regularized upper incomplete gamma function Q(a, x) = Gamma(a, x) / Gamma(a)
// for a > 0, x >= 0. Strictly decreasing in x, Q(a, 0) = 1.
double reg_gamma_upper(double a, double x);

// Inverse of the regularized lower incomplete gamma function: returns x such
// that P(a, x) = 1 - Q(a, x) = p, for p in [0, 1) and a > 0. Solved to
// absolute tolerance 1e-12 in p-space by safeguarded Newton iteration with a
// bisection fallback.
double inv_reg_gamma_lower(double p, double a);

// Standard normal CDF.
double std_normal_cdf(double x);

// Standard normal quantile for p in (0, 1).
double std_normal_quantile(double p);

}  // namespace logcalib

#endif  // LOGCALIB_SPECFUN_HPP_
