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

#ifndef LOGCALIB_EXPERIMENTS_HPP_
#define LOGCALIB_EXPERIMENTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "logcalib/calibrate.hpp"
#include "logcalib/optimize.hpp"

namespace logcalib {

struct VarianceRatioRow {
  double epsilon = 0.0;
  double delta = 0.0;
  double rho = 0.0;  // s_a / s_b at unit sensitivity
  double v = 0.0;    // rho^2 * Var(X_a) / Var(X_b)
  bool feasible = false;
};

struct UnitContourCrossing {
  double delta = 0.0;
  double epsilon = 0.0;  // epsilon with v(epsilon, delta) = 1
  bool found = false;
};

struct VarianceRatioTable {
  std::vector<VarianceRatioRow> rows;
  // One entry per delta grid value: where the v = 1 contour crosses that row.
  std::vector<UnitContourCrossing> unit_crossings;
};

VarianceRatioTable variance_ratio_table(const NoiseFamily& a,
                                        const NoiseFamily& b,
                                        const std::vector<double>& epsilon_grid,
                                        const std::vector<double>& delta_grid,
                                        const CalibrationOptions& opts = {});

struct ExperimentConfig {
  std::vector<double> epsilon_list{0.01, 0.1, 1.0};
  double delta = 1e-4;
  std::vector<int> m_list{10, 100, 500, 1000, 2000};
  int n = 500;                   // database length
  int databases_per_cell = 100;
  std::uint64_t seed = 20260824;
  std::vector<double> grid = default_subbotin_grid();

  void validate() const;
};

struct TrialRecord {
  double epsilon = 0.0;
  int m = 0;
  std::string mechanism;  // Gauss | Sub(r) | Gauss-t | Sub(r)-t | Gauss-JS
  double l2_error = 0.0;
  double r_used = 0.0;
  double scale_used = 0.0;
  std::uint64_t seed = 0;
};

struct CellSummary {
  double epsilon = 0.0;
  int m = 0;
  std::string mechanism;
  double mean_l2_error = 0.0;
  double stderr_l2_error = 0.0;
  double r = 0.0;
  double scale = 0.0;
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;
  std::vector<CellSummary> summaries;
};

// The mean-vector comparison: for each (epsilon, m) cell, one standard-normal
// center v, databases of n uniform records in v + [-1/2, 1/2]^m, query =
// coordinatewise mean, and the five mechanisms Gauss, Sub(r), Gauss-t,
// Sub(r)-t, Gauss-JS.
ExperimentResult mean_vector_experiment(const ExperimentConfig& config);

// CSV with header epsilon,m,mechanism,mean_l2_error,stderr,r,scale,seed.
void write_summary_csv(const ExperimentResult& result, std::ostream& os);

// JSON sidecar: config echo, tool version, tolerances.
void write_metadata_json(const ExperimentConfig& config, std::ostream& os);

}  // namespace logcalib

#endif  // LOGCALIB_EXPERIMENTS_HPP_
