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

#include "logcalib/mech.hpp"

#include <cmath>
#include <stdexcept>

namespace logcalib {

VectorMechanism make_vector_mechanism(NoiseFamily family, double scale,
                                      SensitivitySpec sensitivity) {
  sensitivity.validate();
  if (family.kind() != FamilyKind::kSubbotin ||
      family.shape() != sensitivity.norm_order)
    throw std::invalid_argument(
        "make_vector_mechanism: Subbotin index must equal the sensitivity "
        "norm order");
  if (scale < 0.0)
    throw std::invalid_argument("make_vector_mechanism: negative scale");
  return VectorMechanism{std::move(family), scale, sensitivity};
}

VectorMechanism calibrate_vector(double p, const PrivacyBudget& budget,
                                 double delta_q_p,
                                 const CalibrationOptions& opts) {
  if (std::isnan(p) || p < 1.0)
    throw std::domain_error("calibrate_vector: requires p >= 1");
  NoiseFamily family = NoiseFamily::Subbotin(p);
  const CalibrationResult res =
      scale_for_budget(family, budget, delta_q_p, opts);
  SensitivitySpec spec;
  spec.delta_q = delta_q_p;
  spec.norm_order = p;
  return VectorMechanism{std::move(family), res.scale, spec};
}

Eigen::VectorXd apply(const VectorMechanism& mechanism,
                      const Eigen::Ref<const Eigen::VectorXd>& query_value,
                      std::mt19937_64& rng) {
  Eigen::VectorXd out = query_value;
  if (mechanism.scale == 0.0) return out;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] += mechanism.scale * mechanism.family.draw(rng);
  return out;
}

double p_norm(const Eigen::Ref<const Eigen::VectorXd>& v, double p) {
  if (std::isnan(p) || p < 1.0)
    throw std::domain_error("p_norm: requires p >= 1");
  if (std::isinf(p)) return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (v.size() == 0) return 0.0;
  // Factor out the largest magnitude so large p does not overflow.
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    sum += std::pow(std::abs(v[i]) / m, p);
  return m * std::pow(sum, 1.0 / p);
}

double linear_sensitivity_bound(int m, double nu_abs,
                                double range_inf_diameter, double p) {
  if (m < 1) throw std::domain_error("linear_sensitivity_bound: m >= 1");
  if (std::isnan(p) || p < 1.0)
    throw std::domain_error("linear_sensitivity_bound: requires p >= 1");
  if (nu_abs < 0.0 || range_inf_diameter < 0.0)
    throw std::domain_error("linear_sensitivity_bound: negative magnitude");
  return std::pow(static_cast<double>(m), 1.0 / p) * nu_abs *
         range_inf_diameter;
}

}  // namespace logcalib
