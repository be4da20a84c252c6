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

#include "logcalib/postprocess.hpp"

#include <cmath>
#include <stdexcept>

namespace logcalib {

Eigen::VectorXd james_stein(const Eigen::Ref<const Eigen::VectorXd>& y,
                            double scale) {
  const Eigen::Index m = y.size();
  if (m <= 2) throw std::domain_error("james_stein: requires m > 2");
  if (!(scale > 0.0)) throw std::domain_error("james_stein: requires scale > 0");
  const double norm_sq = y.squaredNorm();
  if (norm_sq == 0.0) throw std::domain_error("james_stein: zero vector");
  const double factor =
      std::max(0.0, 1.0 - (static_cast<double>(m) - 2.0) * scale * scale /
                              norm_sq);
  return factor * y;
}

Eigen::VectorXd soft_threshold(const Eigen::Ref<const Eigen::VectorXd>& y,
                               const ThresholdSpec& t) {
  if (t.value < 0.0) throw std::domain_error("soft_threshold: negative t");
  Eigen::VectorXd out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double mag = std::max(0.0, std::abs(y[i]) - t.value);
    out[i] = y[i] < 0.0 ? -mag : mag;
  }
  return out;
}

ThresholdSpec gaussian_threshold(double scale, int m) {
  if (m < 2) throw std::domain_error("gaussian_threshold: requires m >= 2");
  if (!(scale > 0.0))
    throw std::domain_error("gaussian_threshold: requires scale > 0");
  return ThresholdSpec{scale * std::sqrt(2.0 * std::log(m)),
                       ThresholdSource::kAnalyticGaussian};
}

ThresholdSpec monte_carlo_threshold(const NoiseFamily& family, double scale,
                                    int m, int trials, std::mt19937_64& rng) {
  if (m < 1 || trials < 1)
    throw std::domain_error("monte_carlo_threshold: counts must be positive");
  if (scale < 0.0)
    throw std::domain_error("monte_carlo_threshold: negative scale");
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    double max_component = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
      max_component = std::max(max_component, family.draw(rng));
    sum += max_component;
  }
  return ThresholdSpec{scale * sum / trials, ThresholdSource::kMonteCarlo};
}

}  // namespace logcalib
