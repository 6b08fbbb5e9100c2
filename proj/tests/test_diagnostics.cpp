#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "acev/diagnostics.hpp"
#include "oracles.hpp"

using namespace acev;

namespace {

ModelParams jump_case() {
  ModelParams p;
  p.gamma = 0.54;
  p.alpha = 1.5;
  p.a = 1.05;
  p.sigma1 = 0.37;
  p.sigma2 = 0.37;
  p.k = 2.0;
  p.x0 = 1.0;
  return p;
}

SimulationOptions two_workers() {
  SimulationOptions o;
  o.workers = 2;
  return o;
}

}  // namespace

TEST(DNegBound, FrozenValue) {
  const GridSpec g(1.0, 64, 2.0);
  // 50-digit evaluation, tests/oracles/frozen_values.py
  EXPECT_NEAR(dneg_bound_constant(jump_case(), g), 9.66824794183284631569129, 1e-13);
  EXPECT_NEAR(dneg_probability_bound(jump_case(), g) / 1.872963129672710788019168e-269, 1.0, 1e-12);
}

TEST(DNegBound, FellerLimitSendsConstantToZero) {
  auto p = jump_case();
  const GridSpec g(1.0, 64, p.k);
  double previous = dneg_bound_constant(p, g);
  for (const double gap : {1e-1, 1e-2, 1e-4, 1e-8}) {
    p.a = p.sigma1 * p.sigma1 / 2.0 + gap;
    const double k = dneg_bound_constant(p, g);
    EXPECT_LT(k, previous);
    EXPECT_GT(k, 0.0);
    previous = k;
  }
  EXPECT_LT(previous, 1e-6);
}

TEST(DNegBound, AlphaNearTwo) {
  auto p = jump_case();
  p.alpha = 1.9999;
  const GridSpec g(1.0, 64, p.k);
  const double s1sq = p.sigma1 * p.sigma1;
  const double limit = (p.a - s1sq / 2.0) * (1.0 - s1sq * g.dt() / 2.0) / (p.sigma2 * p.sigma2);
  EXPECT_NEAR(dneg_bound_constant(p, g) / limit, 1.0, 1e-2);
}

TEST(DNegBound, NoJumpsMeansInfiniteConstant) {
  auto p = jump_case();
  p.sigma2 = 0.0;
  const GridSpec g(1.0, 64, p.k);
  EXPECT_EQ(dneg_bound_constant(p, g), std::numeric_limits<double>::infinity());
  EXPECT_EQ(dneg_probability_bound(p, g), 0.0);
}

TEST(DNegBound, DecreasesWithResolution) {
  auto p = jump_case();
  p.alpha = 1.9;  // keeps the bound away from underflow
  p.sigma2 = 1.0;
  double previous = 1.0;
  for (std::size_t n = 8; n <= 1024; n *= 2) {
    const double b = dneg_probability_bound(p, GridSpec(1.0, n, p.k));
    EXPECT_LT(b, previous) << "n=" << n;
    previous = b;
  }
}

TEST(DNegBound, RejectsInvalidParameters) {
  auto p = jump_case();
  p.gamma = 0.9;
  EXPECT_THROW(dneg_bound_constant(p, GridSpec(1.0, 64, p.k)), ValidationError);
}

TEST(DNegFrequency, NoJumpsNeverNegative) {
  auto p = jump_case();
  p.sigma1 = 1.0;
  p.sigma2 = 0.0;
  const auto r = estimate_dneg_frequency(p, GridSpec(1.0, 32, p.k), 10000, 4, two_workers());
  EXPECT_EQ(r.observed_freq, 0.0);
  EXPECT_EQ(r.total_negative_steps, 0u);
  EXPECT_EQ(r.theoretical_bound, 0.0);
}

TEST(DNegFrequency, WithinBoundForJumpExperiment) {
  for (const double alpha : {1.5, 1.2}) {
    auto p = jump_case();
    p.alpha = alpha;
    const GridSpec g(1.0, 64, p.k);
    const auto r = estimate_dneg_frequency(p, g, 10000, 6, two_workers());
    EXPECT_EQ(r.trials, 10000u);
    EXPECT_EQ(r.n, 64u);
    EXPECT_LE(r.observed_freq, r.theoretical_bound + 3.0 * r.mc_stderr) << "alpha=" << alpha;
  }
}

TEST(DNegFrequency, CountsNegativeDriversWhenTheyOccur) {
  // Large jump coefficient and coarse grid: D < 0 becomes common.
  auto p = jump_case();
  p.alpha = 1.9;
  p.sigma2 = 3.0;
  const GridSpec g(1.0, 4, p.k);
  const auto r = estimate_dneg_frequency(p, g, 10000, 8, two_workers());
  EXPECT_GT(r.total_negative_steps, 0u);
  EXPECT_GT(r.observed_freq, 0.0);
  EXPECT_LE(r.observed_freq, 1.0);
  EXPECT_NEAR(r.mc_stderr, std::sqrt(r.observed_freq * (1 - r.observed_freq) / 10000.0), 1e-15);
  EXPECT_LE(r.observed_freq, r.theoretical_bound + 3.0 * r.mc_stderr);
}

TEST(DNegFrequency, TooFewTrials) {
  EXPECT_THROW(estimate_dneg_frequency(jump_case(), GridSpec(1.0, 64, 2.0), 9999, 1),
               std::invalid_argument);
}

TEST(SchemeMoment, DeterministicPathMaximum) {
  auto p = jump_case();
  p.sigma1 = 0.0;
  p.sigma2 = 0.0;
  p.x0 = 0.2;  // rises towards a / k = 0.525
  const GridSpec g(1.0, 16, p.k);
  double x = p.x0;
  for (int i = 0; i < 16; ++i) x = (x + p.a * g.dt()) / (1 + p.k * g.dt());
  const auto r = estimate_scheme_moment(p, g, 1.2, 200, 1, two_workers());
  EXPECT_NEAR(r.estimate, std::pow(x, 1.2), 1e-14);
  EXPECT_EQ(r.std_error, 0.0);
}

TEST(SchemeMoment, BetaOutsideRange) {
  const GridSpec g(1.0, 16, 2.0);
  EXPECT_THROW(estimate_scheme_moment(jump_case(), g, 0.5, 200, 1), std::invalid_argument);
  EXPECT_THROW(estimate_scheme_moment(jump_case(), g, 1.5, 200, 1), std::invalid_argument);
}

TEST(SchemeMoment, StableAcrossResolution) {
  const auto p = jump_case();
  const auto reference = estimate_scheme_moment(p, GridSpec(1.0, 16, p.k), 1.0, 20000, 3, two_workers());
  for (const std::size_t n : {32u, 64u, 128u}) {
    const auto r = estimate_scheme_moment(p, GridSpec(1.0, n, p.k), 1.0, 20000, 3, two_workers());
    const double combined = std::hypot(r.std_error, reference.std_error);
    // E[max] grows slightly with n since the grid sees more of the path.
    EXPECT_LT(std::abs(r.estimate - reference.estimate), 5.0 * combined + 0.05) << "n=" << n;
    EXPECT_TRUE(std::isfinite(r.estimate));
  }
}

TEST(SchemeMoment, StandardErrorScaling) {
  auto p = jump_case();
  p.sigma2 = 0.0;
  const GridSpec g(1.0, 16, p.k);
  const auto small = estimate_scheme_moment(p, g, 1.3, 10000, 5, two_workers());
  const auto large = estimate_scheme_moment(p, g, 1.3, 40000, 5, two_workers());
  EXPECT_NEAR(small.std_error / large.std_error, 2.0, 0.2);
}

TEST(InverseMoment, DeterministicValueAndCeiling) {
  auto p = jump_case();
  p.sigma1 = 0.0;
  p.sigma2 = 0.0;
  const GridSpec g(1.0, 32, p.k);
  double x = p.x0;
  for (int i = 0; i < 32; ++i) x = (x + p.a * g.dt()) / (1 + p.k * g.dt());
  const auto r = estimate_inverse_moment(p, g, 2.0, 100, 1, two_workers(), 3.0);
  EXPECT_NEAR(r.estimate, std::pow(x, -2.0), 1e-13);
  EXPECT_EQ(r.excluded, 0u);
  ASSERT_TRUE(r.ceiling.has_value());
  EXPECT_NEAR(*r.ceiling, (1.0 + 3.0) * std::exp(2.0 * p.k), 1e-12);
}

TEST(InverseMoment, StableAcrossResolution) {
  const auto p = jump_case();
  const auto coarse = estimate_inverse_moment(p, GridSpec(1.0, 16, p.k), 1.0, 20000, 9, two_workers());
  const auto fine = estimate_inverse_moment(p, GridSpec(1.0, 128, p.k), 1.0, 20000, 9, two_workers());
  EXPECT_LT(std::abs(coarse.estimate - fine.estimate),
            5.0 * std::hypot(coarse.std_error, fine.std_error) + 0.02);
  EXPECT_FALSE(coarse.ceiling.has_value());
}

TEST(InverseMoment, WarnsBeyondSquareRootThreshold) {
  auto p = jump_case();
  p.gamma = 0.5;
  const GridSpec g(1.0, 16, p.k);
  // 2 a / sigma1^2 - 1 = 14.34...
  EXPECT_TRUE(estimate_inverse_moment(p, g, 1.0, 200, 1, two_workers()).warnings.empty());
  EXPECT_FALSE(estimate_inverse_moment(p, g, 15.0, 200, 1, two_workers()).warnings.empty());
  EXPECT_THROW(estimate_inverse_moment(p, g, 0.0, 200, 1), std::invalid_argument);
}
