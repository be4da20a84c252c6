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

#include "logcalib/optimize.hpp"

#include <cmath>
#include <stdexcept>

#include "logcalib/mech.hpp"

namespace logcalib {

double mse_of(double r, double scale) {
  if (!(scale > 0.0)) throw std::domain_error("mse_of: requires scale > 0");
  return scale * scale * subbotin_variance(r);
}

std::vector<double> default_subbotin_grid() {
  std::vector<double> grid;
  for (double r = 1.0; r <= 14.0 + 1e-9; r += 0.5) grid.push_back(r);
  return grid;
}

OptimizationOutcome optimize_p(const PrivacyBudget& budget, int m,
                               double nu_abs, double range_inf_diameter,
                               const std::vector<double>& grid,
                               const CalibrationOptions& opts) {
  if (grid.empty()) throw std::domain_error("optimize_p: empty grid");
  if (m < 1) throw std::domain_error("optimize_p: requires m >= 1");
  if (!(nu_abs > 0.0) || !(range_inf_diameter > 0.0))
    throw std::domain_error(
        "optimize_p: influence and range diameter must be positive");
  OptimizationOutcome out;
  out.grid_evaluations.reserve(grid.size());
  bool have_best = false;
  for (double r : grid) {
    if (r < 1.0) throw std::domain_error("optimize_p: grid entries must be >= 1");
    GridEvaluation ev;
    ev.r = r;
    try {
      const double delta_r =
          linear_sensitivity_bound(m, nu_abs, range_inf_diameter, r);
      const CalibrationResult res =
          scale_for_budget(NoiseFamily::Subbotin(r), budget, delta_r, opts);
      ev.scale = res.scale;
      ev.mse = mse_of(r, res.scale);
      ev.ok = true;
    } catch (const CalibrationError&) {
      ev.ok = false;
    } catch (const std::domain_error&) {
      ev.ok = false;
    }
    if (ev.ok && (!have_best || ev.mse < out.mse_star)) {
      out.r_star = ev.r;
      out.scale_star = ev.scale;
      out.mse_star = ev.mse;
      have_best = true;
    }
    out.grid_evaluations.push_back(ev);
  }
  if (!have_best)
    throw CalibrationError("optimize_p: calibration failed at every grid point");
  return out;
}

}  // namespace logcalib
