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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "logcalib/noise.hpp"
#include "test_util.hpp"

using namespace logcalib;

namespace {

// Kolmogorov-Smirnov distance of samples against a CDF.
double ks_statistic(std::vector<double> samples, const NoiseFamily& family) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = family.cdf(samples[i]);
    d = std::max(d, std::abs(f - i / n));
    d = std::max(d, std::abs((i + 1) / n - f));
  }
  return d;
}

void check_family_invariants(const NoiseFamily& family) {
  const double a = std::min(family.support_radius(), 10.0) * 0.99;
  // psi even, midpoint-convex; CDF mirror symmetric; quantile inverts.
  for (double x = 0.0; x <= a; x += a / 37.0) {
    CHECK(family.psi(x) == doctest::Approx(family.psi(-x)).epsilon(1e-12));
    CHECK(family.cdf(-x) == doctest::Approx(1.0 - family.cdf(x)).epsilon(1e-10));
  }
  for (double x = -a; x < a; x += a / 19.0) {
    for (double y = x; y < a; y += a / 11.0) {
      const double mid = family.psi(0.5 * (x + y));
      CHECK(mid <= 0.5 * (family.psi(x) + family.psi(y)) + 1e-10);
    }
  }
  for (double p : {1e-6, 0.05, 0.3, 0.5, 0.7, 0.95, 1.0 - 1e-6}) {
    CHECK(family.cdf(family.quantile(p)) == doctest::Approx(p).epsilon(1e-8));
  }
  // Unit mass.
  const auto density = [&](double x) { return family.density(x); };
  const double hi = std::min(family.support_radius(), 40.0);
  CHECK(logcalib_test::quadrature(density, -hi, hi, 1e-11) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

}  // namespace

TEST_CASE("subbotin family closed-form anchors") {
  CHECK(NoiseFamily::Subbotin(1.0).variance() == doctest::Approx(2.0));
  CHECK(NoiseFamily::Subbotin(2.0).variance() == doctest::Approx(1.0));
  const NoiseFamily lap = NoiseFamily::Laplace();
  CHECK(lap.cdf(0.0) == doctest::Approx(0.5));
  CHECK(lap.cdf(1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0) / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(NoiseFamily::Subbotin(0.5), std::domain_error);
}

TEST_CASE("subbotin invariants across the index grid") {
  for (double r : {1.0, 1.5, 2.0, 4.0, 14.0}) {
    CAPTURE(r);
    check_family_invariants(NoiseFamily::Subbotin(r));
  }
}

TEST_CASE("subbotin variance approaches the uniform limit") {
  CHECK(std::abs(subbotin_variance(2000.0) - 1.0 / 3.0) < 0.01);
  CHECK(std::abs(subbotin_variance(200.0) - 1.0 / 3.0) <
        std::abs(subbotin_variance(100.0) - 1.0 / 3.0));
}

TEST_CASE("logistic family") {
  const NoiseFamily fam = NoiseFamily::Logistic();
  CHECK(fam.cdf(0.0) == doctest::Approx(0.5));
  CHECK(fam.variance() == doctest::Approx(M_PI * M_PI / 3.0));
  CHECK(fam.psi(2.0) - fam.psi(-2.0) == doctest::Approx(0.0).epsilon(1e-14));
  check_family_invariants(fam);
}

TEST_CASE("truncated laplace family") {
  CHECK_THROWS_AS(NoiseFamily::TruncatedLaplace(0.0), std::domain_error);
  const double a = 1.0;
  const NoiseFamily fam = NoiseFamily::TruncatedLaplace(a);
  CHECK(fam.cdf(a) == doctest::Approx(1.0));
  CHECK(fam.cdf(0.0) == doctest::Approx(0.5));
  CHECK(fam.support_radius() == a);
  const auto density = [&](double x) { return fam.density(x); };
  CHECK(logcalib_test::quadrature(density, -a, a, 1e-11) ==
        doctest::Approx(1.0).epsilon(1e-8));
  check_family_invariants(fam);
}

TEST_CASE("likelihood ratio is monotone on the support") {
  for (const NoiseFamily& fam :
       {NoiseFamily::Subbotin(1.5), NoiseFamily::Logistic(),
        NoiseFamily::TruncatedLaplace(3.0)}) {
    for (double delta : {0.5, 2.0}) {
      for (double s : {0.7, 1.3}) {
        const double a = std::min(fam.support_radius() * s, 12.0);
        double prev = -std::numeric_limits<double>::infinity();
        for (double z = -0.99 * a; z < 0.99 * a; z += a / 40.0) {
          // log ratio f((z-delta)/s) / f(z/s); may be -inf off-support.
          const double lr = fam.psi(z / s) - fam.psi((z - delta) / s);
          CHECK(lr >= prev - 1e-10);
          prev = std::max(prev, lr);
        }
      }
    }
  }
}

TEST_CASE("sampler moments match closed forms") {
  std::mt19937_64 rng(12345);
  const std::size_t n = 1000000;

  auto moments = [&](const NoiseFamily& fam) {
    const auto xs = sample(fam, n, rng);
    double mean = 0.0, var = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= n;
    return std::pair<double, double>(mean, var);
  };

  const auto [m2, v2] = moments(NoiseFamily::Subbotin(2.0));
  CHECK(std::abs(v2 - 1.0) < 0.01);
  const auto [m1, v1] = moments(NoiseFamily::Subbotin(1.0));
  CHECK(std::abs(m1) < 0.01);
  const auto [ml, vl] = moments(NoiseFamily::Logistic());
  CHECK(std::abs(vl - M_PI * M_PI / 3.0) < 0.05);
}

TEST_CASE("sampler distribution passes KS at the 1% level") {
  // 1% critical value for the one-sample KS statistic.
  const std::size_t n = 100000;
  const double critical = 1.628 / std::sqrt(static_cast<double>(n));
  std::mt19937_64 rng(777);
  for (double r : {1.0, 1.5, 2.0, 4.0}) {
    CAPTURE(r);
    const NoiseFamily fam = NoiseFamily::Subbotin(r);
    CHECK(ks_statistic(sample(fam, n, rng), fam) < critical);
  }
  const NoiseFamily logi = NoiseFamily::Logistic();
  CHECK(ks_statistic(sample(logi, n, rng), logi) < critical);
}

TEST_CASE("custom family hook validates at construction") {
  // A valid custom family: the standard Laplace passed explicitly.
  const auto fam = NoiseFamily::Custom(
      "custom-laplace",
      [](double x) { return std::abs(x) + std::log(2.0); },
      [](double x) {
        return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
      },
      [](double p) {
        return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
      },
      2.0, std::numeric_limits<double>::infinity(),
      [](double d, double s) { return d / s; });
  CHECK(fam.cdf(0.0) == doctest::Approx(0.5));

  // An odd (non-even) psi must be rejected.
  CHECK_THROWS_AS(
      NoiseFamily::Custom(
          "bad", [](double x) { return x + std::log(2.0); },
          [](double x) { return 0.5; }, [](double p) { return 0.0; }, 1.0,
          std::numeric_limits<double>::infinity(),
          [](double, double) { return 1.0; }),
      std::invalid_argument);
}

TEST_CASE("sampling is reproducible for a fixed seed") {
  const NoiseFamily fam = NoiseFamily::Subbotin(2.0);
  std::mt19937_64 rng_a(42), rng_b(42);
  const auto xs = sample(fam, 16, rng_a);
  const auto ys = sample(fam, 16, rng_b);
  CHECK(xs == ys);
}
