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

#include <cmath>
#include <limits>

#include "logcalib/calibrate.hpp"
#include "logcalib/specfun.hpp"
#include "test_util.hpp"

using namespace logcalib;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double laplace_closed_form(double epsilon, double delta, double delta_q) {
  return delta_q / (epsilon - 2.0 * std::log1p(-delta));
}

double logistic_closed_form(double epsilon, double delta, double delta_q) {
  const double e = std::exp(epsilon);
  const double num =
      std::exp(epsilon / 2.0) + std::sqrt(delta * (e + delta - 1.0));
  return delta_q / (2.0 * std::log(num / (1.0 - delta)));
}
}  // namespace

TEST_CASE("budget and sensitivity validation") {
  CHECK_THROWS_AS((PrivacyBudget{-0.1, 0.5}.validate()), std::domain_error);
  CHECK_THROWS_AS((PrivacyBudget{1.0, 1.0}.validate()), std::domain_error);
  CHECK_THROWS_AS((PrivacyBudget{1.0, -0.1}.validate()), std::domain_error);
  CHECK_NOTHROW((PrivacyBudget{0.0, 0.0}.validate()));
  CHECK_THROWS_AS((SensitivitySpec{-1.0, 1.0, 3}.validate()),
                  std::domain_error);
  CHECK_THROWS_AS((SensitivitySpec{1.0, 0.5, 3}.validate()),
                  std::domain_error);
  CHECK_THROWS_AS((SensitivitySpec{1.0, 2.0, 0}.validate()),
                  std::domain_error);
}

TEST_CASE("laplace scale closed form") {
  // s = delta_q / (epsilon - 2 log(1 - delta)).
  const auto res =
      scale_for_budget(NoiseFamily::Laplace(), PrivacyBudget{1.0, 0.1}, 1.0);
  CHECK(res.scale == doctest::Approx(0.82595410018882).epsilon(1e-12));
  CHECK(res.converged);

  for (double eps : {0.1, 1.0, 3.0}) {
    for (double delta : {1e-6, 1e-3, 0.2}) {
      for (double dq : {0.5, 1.0, 4.0}) {
        const auto r = scale_for_budget(NoiseFamily::Laplace(),
                                        PrivacyBudget{eps, delta}, dq);
        CHECK(r.scale ==
              doctest::Approx(laplace_closed_form(eps, delta, dq))
                  .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("logistic scale closed form") {
  const auto res =
      scale_for_budget(NoiseFamily::Logistic(), PrivacyBudget{0.0, 0.1}, 1.0);
  CHECK(res.scale == doctest::Approx(2.4916443272819855).epsilon(1e-12));

  for (double eps : {0.0, 0.5, 2.0}) {
    for (double delta : {1e-5, 0.01, 0.3}) {
      const auto r = scale_for_budget(NoiseFamily::Logistic(),
                                      PrivacyBudget{eps, delta}, 1.0);
      CHECK(r.scale ==
            doctest::Approx(logistic_closed_form(eps, delta, 1.0))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("closed forms agree with forced bisection") {
  CalibrationOptions numeric;
  numeric.force_numeric = true;
  numeric.scale_rel_tol = 1e-11;
  for (double eps : {0.2, 1.0}) {
    for (double delta : {1e-4, 0.05}) {
      const PrivacyBudget budget{eps, delta};
      for (const NoiseFamily& fam :
           {NoiseFamily::Laplace(), NoiseFamily::Logistic()}) {
        const double closed = scale_for_budget(fam, budget, 1.0).scale;
        const double bisected = scale_for_budget(fam, budget, 1.0, numeric).scale;
        CHECK(bisected == doctest::Approx(closed).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("threshold closed forms") {
  // Laplace: t = (epsilon s + delta_q) / 2 when delta_q > epsilon s.
  CHECK(threshold_t(NoiseFamily::Laplace(), 1.0, 2.0, 1.0) ==
        doctest::Approx(1.5).epsilon(1e-12));
  // Criterion holds everywhere when delta_q <= epsilon s.
  CHECK(threshold_t(NoiseFamily::Laplace(), 2.0, 1.0, 1.0) == kInf);
  // Gaussian: t = (2 epsilon s^2 + delta_q^2) / (2 delta_q).
  CHECK(threshold_t(NoiseFamily::Gaussian(), 1.0, 1.0, 1.0) ==
        doctest::Approx(1.5).epsilon(1e-12));
  CHECK(threshold_t(NoiseFamily::Gaussian(), 0.5, 2.0, 3.0) ==
        doctest::Approx((2.0 * 0.5 * 9.0 + 4.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("numeric threshold satisfies the defining equation") {
  for (double r : {1.5, 4.0, 7.0}) {
    const NoiseFamily fam = NoiseFamily::Subbotin(r);
    for (double eps : {0.1, 1.0}) {
      for (double s : {0.5, 2.0}) {
        const double dq = 1.0;
        const double t = threshold_t(fam, eps, dq, s);
        REQUIRE(std::isfinite(t));
        const double gap = fam.psi(t / s) - fam.psi((t - dq) / s) - eps;
        CHECK(std::abs(gap) < 1e-8);
      }
    }
  }
}

TEST_CASE("privacy profile matches the quadrature oracle") {
  for (const NoiseFamily& fam :
       {NoiseFamily::Subbotin(1.5), NoiseFamily::Subbotin(4.0),
        NoiseFamily::Logistic(), NoiseFamily::TruncatedLaplace(4.0)}) {
    CAPTURE(fam.name());
    for (double eps : {0.1, 1.0}) {
      for (double s : {0.6, 1.5}) {
        const double prof = privacy_profile(fam, eps, 1.0, s);
        const double oracle = oracle_delta(fam, eps, 1.0, s);
        CHECK(std::abs(prof - oracle) < 1e-8);
      }
    }
  }
}

TEST_CASE("privacy profile edge cases") {
  CHECK(privacy_profile(NoiseFamily::Gaussian(), 1.0, 0.0, 1.0) == 0.0);
  // Finite support swallowed entirely: delta_q >= 2 a s forces delta = 1.
  const NoiseFamily trunc = NoiseFamily::TruncatedLaplace(1.0);
  CHECK(privacy_profile(trunc, 1.0, 2.0, 1.0) == 1.0);
  CHECK(privacy_profile(trunc, 1.0, 5.0, 1.0) == 1.0);
  // Large epsilon on Laplace: criterion holds everywhere, delta = 0.
  CHECK(privacy_profile(NoiseFamily::Laplace(), 3.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("finite support threshold cap") {
  // With t capped at a s, the profile is F(delta_q / s - a).
  const double a = 2.0;
  const NoiseFamily trunc = NoiseFamily::TruncatedLaplace(a);
  const double s = 1.0;
  const double dq = 1.0;
  const double eps = 10.0;  // big enough that the ratio never exceeds e^eps
  CHECK(threshold_t(trunc, eps, dq, s) == a * s);
  CHECK(privacy_profile(trunc, eps, dq, s) ==
        doctest::Approx(trunc.cdf(dq / s - a)).epsilon(1e-10));
}

TEST_CASE("calibrated scale is tight") {
  for (const NoiseFamily& fam :
       {NoiseFamily::Subbotin(3.0), NoiseFamily::Logistic(),
        NoiseFamily::TruncatedLaplace(6.0)}) {
    CAPTURE(fam.name());
    const PrivacyBudget budget{1.0, 1e-3};
    const auto res = scale_for_budget(fam, budget, 1.0);
    CHECK(res.converged);
    CHECK(privacy_profile(fam, budget.epsilon, 1.0, res.scale) <=
          budget.delta * (1.0 + 1e-7));
    CHECK(privacy_profile(fam, budget.epsilon, 1.0, 0.995 * res.scale) >
          budget.delta);
  }
}

TEST_CASE("scale is linear in sensitivity") {
  for (const NoiseFamily& fam :
       {NoiseFamily::Subbotin(2.5), NoiseFamily::Logistic()}) {
    const PrivacyBudget budget{0.7, 1e-4};
    const double unit = scale_for_budget(fam, budget, 1.0).scale;
    for (double dq : {0.1, 3.0, 17.0}) {
      CHECK(scale_for_budget(fam, budget, dq).scale ==
            doctest::Approx(dq * unit).epsilon(1e-8));
    }
  }
}

TEST_CASE("scale decreases in epsilon and in delta") {
  const NoiseFamily fam = NoiseFamily::Subbotin(4.0);
  double prev = kInf;
  for (double eps : {0.05, 0.2, 1.0, 3.0}) {
    const double s = scale_for_budget(fam, PrivacyBudget{eps, 1e-4}, 1.0).scale;
    CHECK(s < prev);
    prev = s;
  }
  prev = kInf;
  for (double delta : {1e-6, 1e-4, 1e-2, 0.2}) {
    const double s =
        scale_for_budget(fam, PrivacyBudget{1.0, delta}, 1.0).scale;
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("profile monotonicity by finite differences") {
  for (const NoiseFamily& fam :
       {NoiseFamily::Subbotin(1.5), NoiseFamily::Gaussian(),
        NoiseFamily::Logistic()}) {
    CAPTURE(fam.name());
    for (double eps : {0.2, 1.0}) {
      for (double s : {0.5, 1.0, 2.0}) {
        const double base = privacy_profile(fam, eps, 1.0, s);
        if (base <= 0.0) continue;
        CHECK(privacy_profile(fam, eps, 1.0, 1.05 * s) < base);
        CHECK(privacy_profile(fam, eps + 0.05, 1.0, s) < base);
        CHECK(privacy_profile(fam, eps, 1.05, s) > base);
      }
    }
  }
}

TEST_CASE("pure DP scales") {
  // MLR-bounded families support delta = 0 with s = delta_q / epsilon.
  const auto lap =
      scale_for_budget(NoiseFamily::Laplace(), PrivacyBudget{2.0, 0.0}, 1.0);
  CHECK(lap.scale == doctest::Approx(0.5).epsilon(1e-10));
  const auto logi =
      scale_for_budget(NoiseFamily::Logistic(), PrivacyBudget{2.0, 0.0}, 1.0);
  CHECK(logi.scale == doctest::Approx(0.5).epsilon(1e-10));
  // Unbounded likelihood ratio (r > 1) and finite support both fail.
  CHECK_THROWS_AS(scale_for_budget(NoiseFamily::Gaussian(),
                                   PrivacyBudget{2.0, 0.0}, 1.0),
                  CalibrationError);
  CHECK_THROWS_AS(scale_for_budget(NoiseFamily::TruncatedLaplace(2.0),
                                   PrivacyBudget{2.0, 0.0}, 1.0),
                  CalibrationError);
}

TEST_CASE("gaussian scale satisfies its defining equation with equality") {
  for (double eps : {0.1, 1.0, 2.0}) {
    for (double delta : {1e-6, 1e-4, 0.01}) {
      for (double dq : {0.5, 1.0}) {
        const double sigma =
            gaussian_scale(PrivacyBudget{eps, delta}, dq).scale;
        const double lhs =
            std_normal_cdf(dq / (2.0 * sigma) - eps * sigma / dq) -
            std::exp(eps) *
                std_normal_cdf(-dq / (2.0 * sigma) - eps * sigma / dq);
        CHECK(lhs == doctest::Approx(delta).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("gaussian scale frozen anchor") {
  const double dq = std::sqrt(10.0) / 500.0;
  const auto res = gaussian_scale(PrivacyBudget{1.0, 1e-4}, dq);
  CHECK(res.scale == doctest::Approx(0.020148154794168528).epsilon(1e-8));
  CHECK_THROWS_AS(gaussian_scale(PrivacyBudget{1.0, 0.0}, 1.0),
                  std::domain_error);
}

TEST_CASE("oracle delta agrees with an independent quadrature") {
  const NoiseFamily fam = NoiseFamily::Subbotin(4.0);
  const double eps = 1.0, dq = 1.0, s = 0.8;
  const auto integrand = [&](double x) {
    const double diff =
        fam.density((x - dq) / s) / s - std::exp(eps) * fam.density(x / s) / s;
    return std::max(0.0, diff);
  };
  const double lo = dq / 2.0;
  const double hi = dq + s * fam.quantile(1.0 - 1e-15);
  const double ref = logcalib_test::quadrature(integrand, lo, hi, 1e-13);
  CHECK(oracle_delta(fam, eps, dq, s) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("calibration input validation") {
  CHECK_THROWS_AS(scale_for_budget(NoiseFamily::Laplace(),
                                   PrivacyBudget{-1.0, 0.1}, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(scale_for_budget(NoiseFamily::Laplace(),
                                   PrivacyBudget{1.0, 0.1}, -1.0),
                  std::domain_error);
}
