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

#ifndef LOGCALIB_POSTPROCESS_HPP_
#define LOGCALIB_POSTPROCESS_HPP_

#include <Eigen/Dense>
#include <random>

#include "logcalib/noise.hpp"

namespace logcalib {

enum class ThresholdSource { kAnalyticGaussian, kMonteCarlo };

struct ThresholdSpec {
  double value = 0.0;
  ThresholdSource source = ThresholdSource::kAnalyticGaussian;
};

// Positive-part James-Stein shrinkage: (1 - (m-2) scale^2 / |y|^2)_+ * y.
// Requires m > 2 and a nonzero y.
Eigen::VectorXd james_stein(const Eigen::Ref<const Eigen::VectorXd>& y,
                            double scale);

// Coordinatewise sign(y_i) * max(0, |y_i| - t).
Eigen::VectorXd soft_threshold(const Eigen::Ref<const Eigen::VectorXd>& y,
                               const ThresholdSpec& t);

// scale * sqrt(2 ln m): the standard bound on the expected maximum of m iid
// scale-s Gaussians. Requires m >= 2.
ThresholdSpec gaussian_threshold(double scale, int m);

// scale * mean over trials of max component of an m-vector of standard
// variates.
ThresholdSpec monte_carlo_threshold(const NoiseFamily& family, double scale,
                                    int m, int trials, std::mt19937_64& rng);

inline ThresholdSpec monte_carlo_threshold(const NoiseFamily& family,
                                           double scale, int m,
                                           std::mt19937_64& rng) {
  return monte_carlo_threshold(family, scale, m, 300, rng);
}

}  // namespace logcalib

#endif  // LOGCALIB_POSTPROCESS_HPP_
