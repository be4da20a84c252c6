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

#ifndef LOGCALIB_MECH_HPP_
#define LOGCALIB_MECH_HPP_

#include <Eigen/Dense>
#include <random>

#include "logcalib/calibrate.hpp"
#include "logcalib/noise.hpp"

namespace logcalib {

// A multidimensional Subbotin_p mechanism: query + scale * iid Subbotin_p
// noise, private for sensitivity measured in the matching p-norm.
struct VectorMechanism {
  NoiseFamily family;
  double scale = 0.0;
  SensitivitySpec sensitivity;
};

// Construction-time pairing check: the Subbotin index must equal the norm
// order of the sensitivity. Throws std::invalid_argument on mismatch.
VectorMechanism make_vector_mechanism(NoiseFamily family, double scale,
                                      SensitivitySpec sensitivity);

// The vector calibration reduces exactly to the one-dimensional problem at
// the p-norm sensitivity; no dimension dependence beyond delta_q_p itself.
VectorMechanism calibrate_vector(double p, const PrivacyBudget& budget,
                                 double delta_q_p,
                                 const CalibrationOptions& opts = {});

Eigen::VectorXd apply(const VectorMechanism& mechanism,
                      const Eigen::Ref<const Eigen::VectorXd>& query_value,
                      std::mt19937_64& rng);

// (sum |v_i|^p)^{1/p} for p >= 1.
double p_norm(const Eigen::Ref<const Eigen::VectorXd>& v, double p);

// Sensitivity bound m^{1/p} * |nu| * linf-diameter for linear queries;
// exact when the per-record range is an linf-ball.
double linear_sensitivity_bound(int m, double nu_abs,
                                double range_inf_diameter, double p);

}  // namespace logcalib

#endif  // LOGCALIB_MECH_HPP_
