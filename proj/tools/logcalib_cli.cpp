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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "logcalib/calibrate.hpp"
#include "logcalib/experiments.hpp"
#include "logcalib/optimize.hpp"

namespace {

using nlohmann::json;
using namespace logcalib;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;

// Default generator seed; override with LOGCALIB_SEED or --seed.
constexpr std::uint64_t kDefaultSeed = 20260824;

std::string g15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::uint64_t env_default_seed() {
  if (const char* env = std::getenv("LOGCALIB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(
          "LOGCALIB_SEED: must be a nonnegative integer");
    }
  }
  return kDefaultSeed;
}

// Family grammar: laplace | logistic | gaussian | subbotin:R |
// trunclaplace:A.
NoiseFamily parse_family(const std::string& spec) {
  if (spec == "laplace") return NoiseFamily::Laplace();
  if (spec == "logistic") return NoiseFamily::Logistic();
  if (spec == "gaussian") return NoiseFamily::Gaussian();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    double param = 0.0;
    try {
      std::size_t used = 0;
      param = std::stod(spec.substr(colon + 1), &used);
      if (used != spec.size() - colon - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("--family: malformed parameter in '" +
                                  spec + "'");
    }
    if (head == "subbotin") return NoiseFamily::Subbotin(param);
    if (head == "trunclaplace") return NoiseFamily::TruncatedLaplace(param);
  }
  throw std::invalid_argument(
      "--family: expected laplace, logistic, gaussian, subbotin:R, or "
      "trunclaplace:A, got '" +
      spec + "'");
}

enum class Format { kJson, kCsv, kPlain };

Format parse_format(const std::string& s) {
  if (s == "json") return Format::kJson;
  if (s == "csv") return Format::kCsv;
  if (s == "plain") return Format::kPlain;
  throw std::invalid_argument("--format: expected json, csv, or plain");
}

void add_format_flag(CLI::App* cmd, std::string* fmt) {
  cmd->add_option("--format", *fmt, "Output format: json, csv, or plain")
      ->default_val("plain");
}

json calibration_json(const CalibrationResult& res) {
  return json{{"scale", res.scale},
              {"threshold", res.threshold},
              {"achieved_delta", res.achieved_delta},
              {"converged", res.converged},
              {"iterations", res.iterations}};
}

void emit_calibration(const std::string& family, const PrivacyBudget& budget,
                      double sensitivity, const CalibrationResult& res,
                      Format fmt) {
  switch (fmt) {
    case Format::kJson: {
      json j = calibration_json(res);
      j["family"] = family;
      j["epsilon"] = budget.epsilon;
      j["delta"] = budget.delta;
      j["sensitivity"] = sensitivity;
      // Infinity is not representable in JSON; emit as string.
      if (std::isinf(res.threshold)) j["threshold"] = "inf";
      std::cout << j.dump(2) << '\n';
      break;
    }
    case Format::kCsv:
      std::cout << "family,epsilon,delta,sensitivity,scale,threshold,"
                   "achieved_delta,converged,iterations\n"
                << family << ',' << g15(budget.epsilon) << ','
                << g15(budget.delta) << ',' << g15(sensitivity) << ','
                << g15(res.scale) << ',' << g15(res.threshold) << ','
                << g15(res.achieved_delta) << ',' << (res.converged ? 1 : 0)
                << ',' << res.iterations << '\n';
      break;
    case Format::kPlain:
      std::cout << "scale " << g15(res.scale) << "\nthreshold "
                << g15(res.threshold) << "\nachieved_delta "
                << g15(res.achieved_delta) << "\nconverged "
                << (res.converged ? "true" : "false") << "\niterations "
                << res.iterations << '\n';
      break;
  }
}

int run_calibrate(const std::string& family_spec, double eps, double delta,
                  double sensitivity, Format fmt) {
  const NoiseFamily family = parse_family(family_spec);
  const PrivacyBudget budget{eps, delta};
  const CalibrationResult res =
      family_spec == "gaussian" ? gaussian_scale(budget, sensitivity)
                                : scale_for_budget(family, budget, sensitivity);
  emit_calibration(family_spec, budget, sensitivity, res, fmt);
  return kExitOk;
}

int run_profile(const std::string& family_spec, double eps,
                double sensitivity, double scale_min, double scale_max,
                int points, Format fmt) {
  if (!(scale_min > 0.0))
    throw std::invalid_argument("--scale-min: must be positive");
  if (scale_max < scale_min)
    throw std::invalid_argument("--scale-max: must be >= --scale-min");
  if (points < 1) throw std::invalid_argument("--points: must be >= 1");
  const NoiseFamily family = parse_family(family_spec);

  std::vector<std::pair<double, double>> rows;
  for (int i = 0; i < points; ++i) {
    const double s =
        points == 1 ? scale_min
                    : scale_min + (scale_max - scale_min) * i / (points - 1);
    rows.emplace_back(s, privacy_profile(family, eps, sensitivity, s));
  }

  switch (fmt) {
    case Format::kJson: {
      json j = json::array();
      for (const auto& [s, d] : rows)
        j.push_back(json{{"scale", s}, {"delta", d}});
      std::cout << j.dump(2) << '\n';
      break;
    }
    case Format::kCsv:
      std::cout << "scale,delta\n";
      for (const auto& [s, d] : rows)
        std::cout << g15(s) << ',' << g15(d) << '\n';
      break;
    case Format::kPlain:
      for (const auto& [s, d] : rows)
        std::cout << g15(s) << ' ' << g15(d) << '\n';
      break;
  }
  return kExitOk;
}

int run_compare(const std::string& a_spec, const std::string& b_spec,
                const std::vector<double>& eps_grid,
                const std::vector<double>& delta_grid, Format fmt) {
  if (eps_grid.empty()) throw std::invalid_argument("--eps-grid: required");
  if (delta_grid.empty())
    throw std::invalid_argument("--delta-grid: required");
  const NoiseFamily a = parse_family(a_spec);
  const NoiseFamily b = parse_family(b_spec);
  const auto table = variance_ratio_table(a, b, eps_grid, delta_grid);

  switch (fmt) {
    case Format::kJson: {
      json j;
      j["rows"] = json::array();
      for (const auto& row : table.rows) {
        json r{{"epsilon", row.epsilon},
               {"delta", row.delta},
               {"feasible", row.feasible}};
        if (row.feasible) {
          r["rho"] = row.rho;
          r["v"] = row.v;
        }
        j["rows"].push_back(r);
      }
      j["unit_crossings"] = json::array();
      for (const auto& c : table.unit_crossings) {
        json r{{"delta", c.delta}, {"found", c.found}};
        if (c.found) r["epsilon"] = c.epsilon;
        j["unit_crossings"].push_back(r);
      }
      std::cout << j.dump(2) << '\n';
      break;
    }
    case Format::kCsv:
      std::cout << "epsilon,delta,rho,v,feasible\n";
      for (const auto& row : table.rows)
        std::cout << g15(row.epsilon) << ',' << g15(row.delta) << ','
                  << (row.feasible ? g15(row.rho) : "") << ','
                  << (row.feasible ? g15(row.v) : "") << ','
                  << (row.feasible ? 1 : 0) << '\n';
      break;
    case Format::kPlain:
      for (const auto& row : table.rows) {
        std::cout << "eps " << g15(row.epsilon) << " delta "
                  << g15(row.delta);
        if (row.feasible)
          std::cout << " rho " << g15(row.rho) << " v " << g15(row.v) << '\n';
        else
          std::cout << " infeasible\n";
      }
      for (const auto& c : table.unit_crossings)
        if (c.found)
          std::cout << "unit crossing at delta " << g15(c.delta) << ": eps "
                    << g15(c.epsilon) << '\n';
      break;
  }
  return kExitOk;
}

int run_optimize_p(double eps, double delta, int dim, double nu, double diam,
                   const std::vector<double>& grid, Format fmt) {
  const PrivacyBudget budget{eps, delta};
  const auto out = grid.empty()
                       ? optimize_p(budget, dim, nu, diam)
                       : optimize_p(budget, dim, nu, diam, grid);

  switch (fmt) {
    case Format::kJson: {
      json j{{"r_star", out.r_star},
             {"scale_star", out.scale_star},
             {"mse_star", out.mse_star}};
      j["grid"] = json::array();
      for (const auto& ev : out.grid_evaluations) {
        json r{{"r", ev.r}, {"ok", ev.ok}};
        if (ev.ok) {
          r["scale"] = ev.scale;
          r["mse"] = ev.mse;
        }
        j["grid"].push_back(r);
      }
      std::cout << j.dump(2) << '\n';
      break;
    }
    case Format::kCsv:
      std::cout << "r,scale,mse,ok,selected\n";
      for (const auto& ev : out.grid_evaluations)
        std::cout << g15(ev.r) << ',' << (ev.ok ? g15(ev.scale) : "") << ','
                  << (ev.ok ? g15(ev.mse) : "") << ',' << (ev.ok ? 1 : 0)
                  << ',' << (ev.ok && ev.r == out.r_star ? 1 : 0) << '\n';
      break;
    case Format::kPlain:
      std::cout << "r_star " << g15(out.r_star) << "\nscale_star "
                << g15(out.scale_star) << "\nmse_star " << g15(out.mse_star)
                << '\n';
      break;
  }
  return kExitOk;
}

int run_sample(const std::string& family_spec, double scale, int count,
               std::uint64_t seed, Format fmt) {
  if (scale < 0.0) throw std::invalid_argument("--scale: must be >= 0");
  if (count < 0) throw std::invalid_argument("--count: must be >= 0");
  const NoiseFamily family = parse_family(family_spec);
  std::mt19937_64 rng(seed);
  const auto raw = sample(family, static_cast<std::size_t>(count), rng);

  switch (fmt) {
    case Format::kJson: {
      json j = json::array();
      for (double x : raw) j.push_back(scale * x);
      std::cout << j.dump(2) << '\n';
      break;
    }
    case Format::kCsv:
      std::cout << "value\n";
      for (double x : raw) std::cout << g15(scale * x) << '\n';
      break;
    case Format::kPlain:
      for (double x : raw) std::cout << g15(scale * x) << '\n';
      break;
  }
  return kExitOk;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) parts.push_back(item);
  return parts;
}

// Flat key = value config mirroring the ExperimentConfig field names;
// '#' starts a comment, list values are comma-separated.
ExperimentConfig load_experiment_config(const std::string& path,
                                        std::uint64_t default_seed) {
  ExperimentConfig config;
  config.seed = default_seed;
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("--config: cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    std::string key = eq == std::string::npos ? line : line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    if (key.empty()) continue;
    if (eq == std::string::npos)
      throw std::invalid_argument("--config: line " + std::to_string(lineno) +
                                  ": expected key = value");
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t") + 1);
    try {
      if (key == "epsilon_list") {
        config.epsilon_list.clear();
        for (const auto& p : split_commas(value))
          config.epsilon_list.push_back(std::stod(p));
      } else if (key == "delta") {
        config.delta = std::stod(value);
      } else if (key == "m_list") {
        config.m_list.clear();
        for (const auto& p : split_commas(value))
          config.m_list.push_back(std::stoi(p));
      } else if (key == "n") {
        config.n = std::stoi(value);
      } else if (key == "databases_per_cell") {
        config.databases_per_cell = std::stoi(value);
      } else if (key == "seed") {
        config.seed = std::stoull(value);
      } else if (key == "grid") {
        config.grid.clear();
        for (const auto& p : split_commas(value))
          config.grid.push_back(std::stod(p));
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("--config: line " + std::to_string(lineno) +
                                  ": " + e.what());
    }
  }
  return config;
}

int run_experiment(const std::string& config_path,
                   const std::string& metadata_path,
                   std::optional<std::uint64_t> seed_flag, Format fmt) {
  ExperimentConfig config =
      config_path.empty()
          ? ExperimentConfig{}
          : load_experiment_config(config_path, env_default_seed());
  if (config_path.empty()) config.seed = env_default_seed();
  if (seed_flag) config.seed = *seed_flag;
  config.validate();

  const auto result = mean_vector_experiment(config);

  if (!metadata_path.empty()) {
    std::ofstream meta(metadata_path);
    if (!meta)
      throw std::invalid_argument("--metadata: cannot open '" +
                                  metadata_path + "'");
    write_metadata_json(config, meta);
  }

  if (fmt == Format::kJson) {
    std::ostringstream meta;
    write_metadata_json(config, meta);
    json j;
    j["metadata"] = json::parse(meta.str());
    j["summaries"] = json::array();
    for (const auto& s : result.summaries)
      j["summaries"].push_back(json{{"epsilon", s.epsilon},
                                    {"m", s.m},
                                    {"mechanism", s.mechanism},
                                    {"mean_l2_error", s.mean_l2_error},
                                    {"stderr", s.stderr_l2_error},
                                    {"r", s.r},
                                    {"scale", s.scale},
                                    {"seed", s.seed}});
    std::cout << j.dump(2) << '\n';
  } else {
    write_summary_csv(result, std::cout);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise calibration for (epsilon, delta) differential privacy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "logcalib 1.0.0");

  std::string family, fmt_s, a_spec, b_spec, config_path, metadata_path;
  double eps = 0.0, delta = 0.0, sensitivity = 0.0;
  double scale_min = 0.0, scale_max = 0.0, scale = 1.0, nu = 0.0, diam = 0.0;
  int points = 0, dim = 0, count = 0;
  std::vector<double> eps_grid, delta_grid, grid;
  std::uint64_t seed = 0;

  auto* cal = app.add_subcommand("calibrate", "Minimal noise scale");
  cal->add_option("--family", family)->required();
  cal->add_option("--eps", eps)->required()->check(CLI::NonNegativeNumber);
  cal->add_option("--delta", delta)->required();
  cal->add_option("--sensitivity", sensitivity)
      ->required()
      ->check(CLI::NonNegativeNumber);
  add_format_flag(cal, &fmt_s);

  auto* prof = app.add_subcommand("profile", "Privacy profile over scales");
  prof->add_option("--family", family)->required();
  prof->add_option("--eps", eps)->required()->check(CLI::NonNegativeNumber);
  prof->add_option("--sensitivity", sensitivity)
      ->required()
      ->check(CLI::NonNegativeNumber);
  prof->add_option("--scale-min", scale_min)->required();
  prof->add_option("--scale-max", scale_max)->required();
  prof->add_option("--points", points)->required();
  add_format_flag(prof, &fmt_s);

  auto* cmp = app.add_subcommand("compare", "Variance ratio table");
  cmp->add_option("--a", a_spec)->required();
  cmp->add_option("--b", b_spec)->required();
  cmp->add_option("--eps-grid", eps_grid)->required();
  cmp->add_option("--delta-grid", delta_grid)->required();
  add_format_flag(cmp, &fmt_s);

  auto* opt = app.add_subcommand("optimize-p", "Best Subbotin index");
  opt->add_option("--eps", eps)->required()->check(CLI::NonNegativeNumber);
  opt->add_option("--delta", delta)->required();
  opt->add_option("--dim", dim)->required();
  opt->add_option("--nu", nu)->required();
  opt->add_option("--diam", diam)->required();
  opt->add_option("--grid", grid);
  add_format_flag(opt, &fmt_s);

  auto* smp = app.add_subcommand("sample", "Draw noise variates");
  smp->add_option("--family", family)->required();
  smp->add_option("--scale", scale)->required();
  smp->add_option("--count", count)->required();
  auto* smp_seed = smp->add_option("--seed", seed);
  add_format_flag(smp, &fmt_s);

  auto* exp = app.add_subcommand("experiment", "Mean-vector comparison run");
  exp->add_option("--config", config_path, "Flat key = value config file");
  exp->add_option("--metadata", metadata_path, "Write JSON sidecar here");
  auto* exp_seed = exp->add_option("--seed", seed);
  add_format_flag(exp, &fmt_s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    const Format fmt = parse_format(fmt_s);
    if (cal->parsed())
      return run_calibrate(family, eps, delta, sensitivity, fmt);
    if (prof->parsed())
      return run_profile(family, eps, sensitivity, scale_min, scale_max,
                         points, fmt);
    if (cmp->parsed())
      return run_compare(a_spec, b_spec, eps_grid, delta_grid, fmt);
    if (opt->parsed()) return run_optimize_p(eps, delta, dim, nu, diam, grid, fmt);
    if (smp->parsed())
      return run_sample(family, scale, count,
                        smp_seed->count() ? seed : env_default_seed(), fmt);
    if (exp->parsed())
      return run_experiment(config_path, metadata_path,
                            exp_seed->count()
                                ? std::optional<std::uint64_t>(seed)
                                : std::nullopt,
                            fmt);
  } catch (const CalibrationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
