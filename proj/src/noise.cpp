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

#include "logcalib/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "logcalib/specfun.hpp"

namespace logcalib {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double subbotin_log_norm(double r) {
  // log C(r), C(r) = 2 Gamma(1/r) r^{1/r - 1}.
  return std::log(2.0) + log_gamma(1.0 / r) + (1.0 / r - 1.0) * std::log(r);
}

}  // namespace

double subbotin_variance(double r) {
  if (r < 1.0) throw std::domain_error("subbotin_variance: requires r >= 1");
  return std::pow(r, 2.0 / r) *
         std::exp(log_gamma(3.0 / r) - log_gamma(1.0 / r));
}

NoiseFamily NoiseFamily::Subbotin(double r) {
  if (std::isnan(r) || r < 1.0)
    throw std::domain_error("NoiseFamily::Subbotin: requires r >= 1");
  NoiseFamily fam;
  fam.kind_ = FamilyKind::kSubbotin;
  fam.shape_ = r;
  fam.name_ = "subbotin:" + std::to_string(r);
  const double log_norm = subbotin_log_norm(r);
  fam.psi_ = [r, log_norm](double x) {
    return std::pow(std::abs(x), r) / r + log_norm;
  };
  fam.cdf_ = [r](double x) {
    const double q = reg_gamma_upper(1.0 / r, std::pow(std::abs(x), r) / r);
    return 0.5 + sign_of(x) * 0.5 * (1.0 - q);
  };
  fam.quantile_ = [r](double p) {
    const double u = 2.0 * std::abs(p - 0.5);
    return sign_of(p - 0.5) *
           std::pow(r * inv_reg_gamma_lower(u, 1.0 / r), 1.0 / r);
  };
  fam.variance_ = subbotin_variance(r);
  fam.support_radius_ = kInf;
  fam.mlr_limit_ = [r](double delta_q, double s) {
    return r == 1.0 ? delta_q / s : kInf;
  };
  // sign * G^{1/r} for G ~ Gamma(shape 1/r, rate 1/r); equivalent to
  // inverting the CDF but accurate arbitrarily far into the tails.
  fam.sampler_ = [r](std::mt19937_64& rng) {
    std::gamma_distribution<double> gamma(1.0 / r, r);
    std::bernoulli_distribution coin(0.5);
    const double magnitude = std::pow(gamma(rng), 1.0 / r);
    return coin(rng) ? magnitude : -magnitude;
  };
  return fam;
}

NoiseFamily NoiseFamily::Logistic() {
  NoiseFamily fam;
  fam.kind_ = FamilyKind::kLogistic;
  fam.name_ = "logistic";
  // |x| + 2 log1p(e^{-|x|}) equals x + 2 log(1 + e^{-x}) and is
  // manifestly even and overflow-free.
  fam.psi_ = [](double x) {
    const double ax = std::abs(x);
    return ax + 2.0 * std::log1p(std::exp(-ax));
  };
  fam.cdf_ = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  fam.quantile_ = [](double p) { return std::log(p / (1.0 - p)); };
  fam.variance_ = M_PI * M_PI / 3.0;
  fam.support_radius_ = kInf;
  fam.mlr_limit_ = [](double delta_q, double s) { return delta_q / s; };
  fam.sampler_ = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(
        std::numeric_limits<double>::min(), 1.0);
    const double p = unif(rng);
    return std::log(p / (1.0 - p));
  };
  return fam;
}

NoiseFamily NoiseFamily::TruncatedLaplace(double a) {
  if (std::isnan(a) || a <= 0.0)
    throw std::domain_error("NoiseFamily::TruncatedLaplace: requires a > 0");
  NoiseFamily fam;
  fam.kind_ = FamilyKind::kTruncatedLaplace;
  fam.shape_ = a;
  fam.name_ = "truncated-laplace:" + std::to_string(a);
  const double mass = 2.0 * (1.0 - std::exp(-a));  // integral of e^{-|x|}
  const double log_norm = std::log(mass);
  fam.psi_ = [a, log_norm](double x) {
    if (std::abs(x) >= a) return kInf;
    return std::abs(x) + log_norm;
  };
  fam.cdf_ = [a, mass](double x) {
    if (x <= -a) return 0.0;
    if (x >= a) return 1.0;
    if (x <= 0.0) return (std::exp(x) - std::exp(-a)) / mass;
    return 1.0 - (std::exp(-x) - std::exp(-a)) / mass;
  };
  fam.quantile_ = [a, mass](double p) {
    if (p <= 0.5) return std::log(p * mass + std::exp(-a));
    return -std::log((1.0 - p) * mass + std::exp(-a));
  };
  // Var = 2 - e^{-a} (a^2 + 2a + 2) / (1 - e^{-a}); from integrating
  // x^2 e^{-x} over (0, a).
  fam.variance_ =
      (2.0 - std::exp(-a) * (a * a + 2.0 * a + 2.0)) / (1.0 - std::exp(-a));
  fam.support_radius_ = a;
  fam.mlr_limit_ = [](double delta_q, double s) { return delta_q / s; };
  const auto quantile = fam.quantile_;
  fam.sampler_ = [quantile](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(
        std::numeric_limits<double>::min(), 1.0);
    return quantile(unif(rng));
  };
  return fam;
}

NoiseFamily NoiseFamily::Custom(std::string name, RealFn psi, RealFn cdf,
                                RealFn quantile, double variance,
                                double support_radius, MlrLimitFn mlr_limit,
                                bool validate) {
  if (!psi || !cdf || !quantile || !mlr_limit)
    throw std::invalid_argument("NoiseFamily::Custom: missing function");
  if (!(support_radius > 0.0))
    throw std::invalid_argument(
        "NoiseFamily::Custom: support_radius must be positive");
  NoiseFamily fam;
  fam.kind_ = FamilyKind::kCustom;
  fam.name_ = std::move(name);
  fam.psi_ = std::move(psi);
  fam.cdf_ = std::move(cdf);
  fam.quantile_ = std::move(quantile);
  fam.variance_ = variance;
  fam.support_radius_ = support_radius;
  fam.mlr_limit_ = std::move(mlr_limit);
  const auto q = fam.quantile_;
  fam.sampler_ = [q](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(
        std::numeric_limits<double>::min(), 1.0);
    return q(unif(rng));
  };

  if (validate) {
    const double a = std::min(fam.support_radius_, 20.0);
    const int kGrid = 512;
    double mass = 0.0;
    const double h = 2.0 * a / kGrid;
    for (int i = 0; i <= kGrid; ++i) {
      const double x = -a + i * h;
      const double px = fam.psi_(0.999999 * x);
      const double pnx = fam.psi_(-0.999999 * x);
      if (std::abs(px - pnx) > 1e-8 * std::max(1.0, std::abs(px)))
        throw std::invalid_argument("NoiseFamily::Custom: psi is not even");
      const double w = (i == 0 || i == kGrid) ? 0.5 : 1.0;
      mass += w * std::exp(-fam.psi_(0.999999 * x)) * h;
    }
    for (int i = 1; i + 1 <= kGrid; i += 2) {
      const double x = -0.999 * a + (i - 1) * h;
      const double y = x + 2.0 * h;
      if (y >= a) break;
      const double mid = fam.psi_(0.5 * (x + y));
      if (mid > 0.5 * (fam.psi_(x) + fam.psi_(y)) + 1e-8)
        throw std::invalid_argument(
            "NoiseFamily::Custom: psi fails midpoint convexity");
    }
    if (std::abs(mass - 1.0) > 2e-2)
      throw std::invalid_argument(
          "NoiseFamily::Custom: density does not integrate to ~1");
    for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      const double x = fam.quantile_(p);
      if (std::abs(fam.cdf_(x) - p) > 1e-6)
        throw std::invalid_argument(
            "NoiseFamily::Custom: quantile/CDF mismatch");
    }
  }
  return fam;
}

double NoiseFamily::density(double x) const {
  const double p = psi_(x);
  return std::isinf(p) ? 0.0 : std::exp(-p);
}

double NoiseFamily::quantile(double p) const {
  if (std::isnan(p) || p <= 0.0 || p >= 1.0)
    throw std::domain_error("NoiseFamily::quantile: requires p in (0, 1)");
  return quantile_(p);
}

std::optional<double> NoiseFamily::analytic_threshold(double epsilon,
                                                      double delta_q,
                                                      double s) const {
  if (kind_ != FamilyKind::kSubbotin) return std::nullopt;
  if (shape_ == 1.0) {
    // |z/s| - |(z - delta)/s| = epsilon has a solution only if delta > eps s.
    if (delta_q > epsilon * s) return (epsilon * s + delta_q) / 2.0;
    return kInf;
  }
  if (shape_ == 2.0) {
    return (2.0 * epsilon * s * s + delta_q * delta_q) / (2.0 * delta_q);
  }
  return std::nullopt;
}

std::vector<double> sample(const NoiseFamily& family, std::size_t count,
                           std::mt19937_64& rng) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(family.draw(rng));
  return out;
}

}  // namespace logcalib
