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

#ifndef LOGCALIB_OPTIMIZE_HPP_
#define LOGCALIB_OPTIMIZE_HPP_

#include <vector>

#include "logcalib/calibrate.hpp"

namespace logcalib {

struct GridEvaluation {
  double r = 0.0;
  double scale = 0.0;
  double mse = 0.0;
  bool ok = false;
};

struct OptimizationOutcome {
  double r_star = 0.0;
  double scale_star = 0.0;
  double mse_star = 0.0;
  std::vector<GridEvaluation> grid_evaluations;
};

// Per-coordinate mean squared error of a scale-s Subbotin_r mechanism:
// s^2 * Var(X) for standard X.
double mse_of(double r, double scale);

// The regular grid 1, 1.5, ..., 14. Callers with query dimensions outside
// the studied range should widen it.
std::vector<double> default_subbotin_grid();

// Grid search for the Subbotin index minimizing the MSE of an m-dimensional
// linear query with per-record influence nu_abs and linf range diameter,
// under the given budget. Ties break toward smaller r. Failed grid points
// are recorded with ok = false and skipped; all-failed throws.
OptimizationOutcome optimize_p(const PrivacyBudget& budget, int m,
                               double nu_abs, double range_inf_diameter,
                               const std::vector<double>& grid =
                                   default_subbotin_grid(),
                               const CalibrationOptions& opts = {});

}  // namespace logcalib

#endif  // LOGCALIB_OPTIMIZE_HPP_
