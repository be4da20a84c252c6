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

#include "logcalib/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "json.hpp"
#include "logcalib/mech.hpp"
#include "logcalib/postprocess.hpp"

namespace logcalib {
namespace {

constexpr const char* kToolVersion = "logcalib 1.0.0";

double unit_scale(const NoiseFamily& family, double epsilon, double delta,
                  const CalibrationOptions& opts) {
  PrivacyBudget budget{epsilon, delta};
  return scale_for_budget(family, budget, 1.0, opts).scale;
}

// splitmix64; used to derive independent sub-generator seeds so results do
// not depend on cell or database execution order.
std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) {
  return mix_seed(a ^ mix_seed(b));
}

std::string format_g15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

}  // namespace

VarianceRatioTable variance_ratio_table(const NoiseFamily& a,
                                        const NoiseFamily& b,
                                        const std::vector<double>& epsilon_grid,
                                        const std::vector<double>& delta_grid,
                                        const CalibrationOptions& opts) {
  VarianceRatioTable table;
  const double var_ratio = a.variance() / b.variance();
  const auto v_at = [&](double eps, double delta) {
    const double rho =
        unit_scale(a, eps, delta, opts) / unit_scale(b, eps, delta, opts);
    return rho * rho * var_ratio;
  };
  for (double delta : delta_grid) {
    for (double eps : epsilon_grid) {
      VarianceRatioRow row;
      row.epsilon = eps;
      row.delta = delta;
      try {
        const double sa = unit_scale(a, eps, delta, opts);
        const double sb = unit_scale(b, eps, delta, opts);
        row.rho = sa / sb;
        row.v = row.rho * row.rho * var_ratio;
        row.feasible = true;
      } catch (const CalibrationError&) {
        row.feasible = false;
      } catch (const std::domain_error&) {
        row.feasible = false;
      }
      table.rows.push_back(row);
    }

    // Unit-contour crossing in epsilon for this delta row.
    UnitContourCrossing crossing;
    crossing.delta = delta;
    if (!epsilon_grid.empty()) {
      double lo = epsilon_grid.front();
      double hi = epsilon_grid.back();
      try {
        double flo = v_at(lo, delta) - 1.0;
        double fhi = v_at(hi, delta) - 1.0;
        if (flo * fhi <= 0.0 && flo != fhi) {
          for (int i = 0; i < 100; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double fmid = v_at(mid, delta) - 1.0;
            if ((fmid <= 0.0) == (flo <= 0.0)) {
              lo = mid;
              flo = fmid;
            } else {
              hi = mid;
            }
          }
          crossing.epsilon = 0.5 * (lo + hi);
          crossing.found = true;
        }
      } catch (const std::exception&) {
        crossing.found = false;
      }
    }
    table.unit_crossings.push_back(crossing);
  }
  return table;
}

void ExperimentConfig::validate() const {
  if (epsilon_list.empty() || m_list.empty())
    throw std::domain_error("ExperimentConfig: empty epsilon or m list");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("ExperimentConfig: delta must be in (0, 1)");
  if (n < 1 || databases_per_cell < 1)
    throw std::domain_error("ExperimentConfig: counts must be positive");
  for (int m : m_list)
    if (m < 3) throw std::domain_error("ExperimentConfig: m must be >= 3");
}

ExperimentResult mean_vector_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  const double nu = 1.0 / config.n;
  const CalibrationOptions opts;

  for (std::size_t ei = 0; ei < config.epsilon_list.size(); ++ei) {
    const double eps = config.epsilon_list[ei];
    for (std::size_t mi = 0; mi < config.m_list.size(); ++mi) {
      const int m = config.m_list[mi];
      const std::uint64_t cell_seed =
          combine_seed(config.seed, (ei << 32) | mi);
      std::mt19937_64 cell_rng(cell_seed);

      // One shared center per cell.
      Eigen::VectorXd center(m);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int j = 0; j < m; ++j) center[j] = normal(cell_rng);

      const PrivacyBudget budget{eps, config.delta};
      const double delta2 = std::sqrt(static_cast<double>(m)) / config.n;
      const double gauss_scale_s = gaussian_scale(budget, delta2, opts).scale;
      const OptimizationOutcome opt =
          optimize_p(budget, m, nu, 1.0, config.grid, opts);
      const NoiseFamily sub_family = NoiseFamily::Subbotin(opt.r_star);
      const NoiseFamily gauss_family = NoiseFamily::Gaussian();

      const ThresholdSpec gauss_t = gaussian_threshold(gauss_scale_s, m);
      std::mt19937_64 threshold_rng(combine_seed(cell_seed, 0x7472657368ULL));
      const ThresholdSpec sub_t = monte_carlo_threshold(
          sub_family, opt.scale_star, m, 300, threshold_rng);

      struct Arm {
        const char* label;
        double r;
        double scale;
        double sum = 0.0;
        double sum_sq = 0.0;
      };
      Arm arms[5] = {{"Gauss", 2.0, gauss_scale_s},
                     {"Sub(r)", opt.r_star, opt.scale_star},
                     {"Gauss-t", 2.0, gauss_scale_s},
                     {"Sub(r)-t", opt.r_star, opt.scale_star},
                     {"Gauss-JS", 2.0, gauss_scale_s}};

      for (int db = 0; db < config.databases_per_cell; ++db) {
        const std::uint64_t db_seed = combine_seed(cell_seed, 1000 + db);
        std::mt19937_64 rng(db_seed);

        // Coordinatewise mean of n uniform records in center + [-1/2, 1/2]^m.
        Eigen::VectorXd query = center;
        std::uniform_real_distribution<double> unif(-0.5, 0.5);
        for (int i = 0; i < config.n; ++i)
          for (int j = 0; j < m; ++j) query[j] += nu * unif(rng);

        Eigen::VectorXd y_gauss = query;
        for (int j = 0; j < m; ++j)
          y_gauss[j] += gauss_scale_s * gauss_family.draw(rng);
        Eigen::VectorXd y_sub = query;
        for (int j = 0; j < m; ++j)
          y_sub[j] += opt.scale_star * sub_family.draw(rng);

        const Eigen::VectorXd outputs[5] = {
            y_gauss, y_sub, soft_threshold(y_gauss, gauss_t),
            soft_threshold(y_sub, sub_t), james_stein(y_gauss, gauss_scale_s)};

        for (int k = 0; k < 5; ++k) {
          const double err = (outputs[k] - query).norm();
          arms[k].sum += err;
          arms[k].sum_sq += err * err;
          result.trials.push_back(TrialRecord{eps, m, arms[k].label, err,
                                              arms[k].r, arms[k].scale,
                                              db_seed});
        }
      }

      const double cnt = config.databases_per_cell;
      for (const Arm& arm : arms) {
        CellSummary summary;
        summary.epsilon = eps;
        summary.m = m;
        summary.mechanism = arm.label;
        summary.mean_l2_error = arm.sum / cnt;
        const double var =
            std::max(0.0, arm.sum_sq / cnt -
                              summary.mean_l2_error * summary.mean_l2_error);
        summary.stderr_l2_error =
            cnt > 1 ? std::sqrt(var / (cnt - 1.0)) : 0.0;
        summary.r = arm.r;
        summary.scale = arm.scale;
        summary.seed = cell_seed;
        result.summaries.push_back(summary);
      }
    }
  }
  return result;
}

void write_summary_csv(const ExperimentResult& result, std::ostream& os) {
  os << "epsilon,m,mechanism,mean_l2_error,stderr,r,scale,seed\n";
  for (const CellSummary& s : result.summaries) {
    os << format_g15(s.epsilon) << ',' << s.m << ',' << s.mechanism << ','
       << format_g15(s.mean_l2_error) << ',' << format_g15(s.stderr_l2_error)
       << ',' << format_g15(s.r) << ',' << format_g15(s.scale) << ',' << s.seed
       << '\n';
  }
}

void write_metadata_json(const ExperimentConfig& config, std::ostream& os) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["config"]["epsilon_list"] = config.epsilon_list;
  j["config"]["delta"] = config.delta;
  j["config"]["m_list"] = config.m_list;
  j["config"]["n"] = config.n;
  j["config"]["databases_per_cell"] = config.databases_per_cell;
  j["config"]["seed"] = config.seed;
  j["config"]["grid"] = config.grid;
  j["l2_error_definition"] = "unnormalized ||output - true query||_2";
  CalibrationOptions opts;
  j["tolerances"]["threshold_abs_tol"] = opts.threshold_abs_tol;
  j["tolerances"]["scale_rel_tol"] = opts.scale_rel_tol;
  j["tolerances"]["oracle_tol"] = opts.oracle_tol;
  os << j.dump(2) << '\n';
}

}  // namespace logcalib
