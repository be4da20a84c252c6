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

#ifndef LOGCALIB_CALIBRATE_HPP_
#define LOGCALIB_CALIBRATE_HPP_

#include <limits>
#include <stdexcept>

#include "logcalib/noise.hpp"

namespace logcalib {

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;

  // Throws std::domain_error on violation of epsilon >= 0, 0 <= delta < 1.
  void validate() const;
};

struct SensitivitySpec {
  double delta_q = 0.0;   // global sensitivity
  double norm_order = 1;  // p of the norm used to measure it
  int dimension = 1;

  void validate() const;
};

struct CalibrationResult {
  double scale = 0.0;
  double threshold = std::numeric_limits<double>::infinity();
  double achieved_delta = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct CalibrationOptions {
  // Absolute tolerance for the threshold root, scaled by max(1, delta_q, s).
  double threshold_abs_tol = 1e-12;
  // Relative tolerance of the scale bisection.
  double scale_rel_tol = 1e-9;
  // Quadrature tolerance for oracle_delta.
  double oracle_tol = 1e-10;
  // Skip closed-form dispatch for Laplace/Logistic and always bisect.
  bool force_numeric = false;
  int max_doublings = 200;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The point above which the shifted-to-unshifted likelihood ratio exceeds
// e^epsilon: sup { z < a s : psi(z/s) - psi((z - delta_q)/s) <= epsilon }.
// +inf when the criterion holds everywhere on an infinite support.
double threshold_t(const NoiseFamily& family, double epsilon, double delta_q,
                   double scale, const CalibrationOptions& opts = {});

// The tight delta achieved at the given epsilon, sensitivity, and scale:
// F((delta_q - t)/s) - e^epsilon F(-t/s), clamped to [0, 1].
double privacy_profile(const NoiseFamily& family, double epsilon,
                       double delta_q, double scale,
                       const CalibrationOptions& opts = {});

// Independent verification oracle: adaptive quadrature of
// integral max(0, f((x - delta_q)/s)/s - e^epsilon f(x/s)/s) dx.
// Does not share the threshold code path with privacy_profile.
double oracle_delta(const NoiseFamily& family, double epsilon, double delta_q,
                    double scale, double tol = 1e-10);

// Minimal scale s with privacy_profile(...) <= budget.delta. Dispatches to
// the closed forms for Laplace and Logistic unless opts.force_numeric.
CalibrationResult scale_for_budget(const NoiseFamily& family,
                                   const PrivacyBudget& budget, double delta_q,
                                   const CalibrationOptions& opts = {});

// Gaussian specialization; requires budget.delta > 0.
CalibrationResult gaussian_scale(const PrivacyBudget& budget, double delta_q,
                                 const CalibrationOptions& opts = {});

}  // namespace logcalib

#endif  // LOGCALIB_CALIBRATE_HPP_
