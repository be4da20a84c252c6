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

#ifndef LOGCALIB_NOISE_HPP_
#define LOGCALIB_NOISE_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace logcalib {

enum class FamilyKind { kSubbotin, kLogistic, kTruncatedLaplace, kCustom };

// A symmetric log-concave noise family in standard (scale 1) form.
//
// The density is f = exp(-psi) with psi convex and even, supported on
// (-support_radius, support_radius). Families are immutable after
// construction; sampling takes an explicitly passed generator.
class NoiseFamily {
 public:
  using RealFn = std::function<double(double)>;
  // (delta_q, s) -> lim_{z -> inf} psi(z/s) - psi((z - delta_q)/s).
  using MlrLimitFn = std::function<double(double, double)>;
  using SamplerFn = std::function<double(std::mt19937_64&)>;

  // Subbotin_r family, r >= 1: psi_r(x) = |x|^r / r + log C(r).
  static NoiseFamily Subbotin(double r);
  // Standard Laplace, alias for Subbotin(1).
  static NoiseFamily Laplace() { return Subbotin(1.0); }
  // Standard Gaussian, alias for Subbotin(2).
  static NoiseFamily Gaussian() { return Subbotin(2.0); }
  // Standard Logistic: density e^{-x} / (1 + e^{-x})^2.
  static NoiseFamily Logistic();
  // Laplace density renormalized to (-a, a), a > 0.
  static NoiseFamily TruncatedLaplace(double a);

  // User-supplied family. When validate is true, evenness, midpoint
  // convexity, quantile/CDF consistency, and unit mass are grid-checked at
  // construction; violations throw std::invalid_argument.
  static NoiseFamily Custom(std::string name, RealFn psi, RealFn cdf,
                            RealFn quantile, double variance,
                            double support_radius, MlrLimitFn mlr_limit,
                            bool validate = true);

  double psi(double x) const { return psi_(x); }
  double density(double x) const;
  double cdf(double x) const { return cdf_(x); }
  double quantile(double p) const;
  double variance() const { return variance_; }
  double support_radius() const { return support_radius_; }
  double mlr_limit(double delta_q, double s) const {
    return mlr_limit_(delta_q, s);
  }

  // One standard variate.
  double draw(std::mt19937_64& rng) const { return sampler_(rng); }

  FamilyKind kind() const { return kind_; }
  // Subbotin index r, or truncation radius a; NaN for other kinds.
  double shape() const { return shape_; }
  const std::string& name() const { return name_; }

  // Exact solution t of psi(t/s) - psi((t - delta_q)/s) = epsilon where one
  // is known (Subbotin r in {1, 2}); +inf encodes an everywhere-satisfied
  // criterion. nullopt means the caller must solve numerically.
  std::optional<double> analytic_threshold(double epsilon, double delta_q,
                                           double s) const;

 private:
  NoiseFamily() = default;

  FamilyKind kind_ = FamilyKind::kCustom;
  double shape_ = std::numeric_limits<double>::quiet_NaN();
  std::string name_;
  RealFn psi_;
  RealFn cdf_;
  RealFn quantile_;
  double variance_ = 0.0;
  double support_radius_ = std::numeric_limits<double>::infinity();
  MlrLimitFn mlr_limit_;
  SamplerFn sampler_;
};

// iid standard variates from the family.
std::vector<double> sample(const NoiseFamily& family, std::size_t count,
                           std::mt19937_64& rng);

// Variance of the standard Subbotin_r member: r^{2/r} Gamma(3/r) / Gamma(1/r).
double subbotin_variance(double r);

}  // namespace logcalib

#endif  // LOGCALIB_NOISE_HPP_
