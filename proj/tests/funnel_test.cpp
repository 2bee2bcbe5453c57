// Copyright 2026 The fmpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fmpc/funnel.hpp"
#include "test_util.hpp"

namespace fmpc {
namespace {

using testing::benchmark_funnels;

TEST(EvalBoundary, ExponentialAtZero)
{
  const auto psi0 = eval_boundary(BoundaryFunction::exponential(3, 2, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(psi0.radius, 3.1);
  EXPECT_DOUBLE_EQ(psi0.rate, -6.0);

  const auto psi1 = eval_boundary(BoundaryFunction::exponential(6, 1, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(psi1.radius, 6.1);
  EXPECT_DOUBLE_EQ(psi1.rate, -6.0);
}

TEST(EvalBoundary, Constant)
{
  const auto b = eval_boundary(BoundaryFunction::constant(0.1), 17.0);
  EXPECT_EQ(b.radius, 0.1);
  EXPECT_EQ(b.rate, 0.0);
}

TEST(EvalBoundary, NegativeTimeIsDomainError)
{
  EXPECT_THROW(eval_boundary(BoundaryFunction::constant(1.0), -1e-9), std::domain_error);
}

TEST(EvalBoundary, CustomRequiresBothCallables)
{
  EXPECT_THROW(BoundaryFunction::custom([](double) { return 1.0; }, nullptr),
               std::invalid_argument);
}

TEST(ValidateG0, ExponentialInfimumAtRightEndpoint)
{
  const auto grid = uniform_grid(0.0, 7.0, 1e-3);
  ASSERT_EQ(grid.size(), 7001u);
  EXPECT_EQ(grid.back(), 7.0);

  const auto r = validate_g0(BoundaryFunction::exponential(3, 2, 0.1), grid);
  ASSERT_TRUE(r.ok);
  EXPECT_NEAR(r.inf_value, 3.0 * std::exp(-14.0) + 0.1, 1e-15);
  EXPECT_NEAR(r.inf_value, 0.10000250, 1e-8);
}

TEST(ValidateG0, DecayingToZeroStillPositiveOnGrid)
{
  const auto r = validate_g0(BoundaryFunction::exponential(1, 1, 0), uniform_grid(0.0, 7.0, 1e-3));
  ASSERT_TRUE(r.ok);
  EXPECT_NEAR(r.inf_value, 9.1188e-4, 1e-8);
}

TEST(ValidateG0, NegativeConstantFailsAtFirstSample)
{
  const auto r = validate_g0(BoundaryFunction::constant(-1.0), uniform_grid(0.0, 1.0, 0.1));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.violation_time, 0.0);
}

TEST(ValidateG0, RejectsBadGrids)
{
  const auto b = BoundaryFunction::constant(1.0);
  const std::vector<double> empty;
  const std::vector<double> non_monotone{0.0, 0.2, 0.1};
  const std::vector<double> negative{-0.1, 0.0};
  EXPECT_THROW(validate_g0(b, empty), std::invalid_argument);
  EXPECT_THROW(validate_g0(b, non_monotone), std::invalid_argument);
  EXPECT_THROW(validate_g0(b, negative), std::invalid_argument);
}

TEST(ValidateG0, NonFiniteDerivativeIsAViolation)
{
  const auto b = BoundaryFunction::custom([](double) { return 1.0; },
                                          [](double t) { return t > 0.5 ? INFINITY : 0.0; });
  const auto r = validate_g0(b, uniform_grid(0.0, 1.0, 0.25));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.violation_time, 0.75);
}

TEST(ValidateG1, BenchmarkFunnelsAccepted)
{
  auto pair = benchmark_funnels();
  const auto r = validate_g1(pair, uniform_grid(0.0, 7.0, 1e-3));
  ASSERT_TRUE(r.ok);
  // psi1 + psi0' = 6 (e^-t - e^-2t) + 0.1, minimal at t = 0.
  EXPECT_NEAR(r.epsilon, 0.1, 1e-12);
  EXPECT_EQ(pair.epsilon, r.epsilon);
}

TEST(ValidateG1, ConstantPair)
{
  FunnelPair pair{BoundaryFunction::constant(1.0), BoundaryFunction::constant(0.5)};
  const auto r = validate_g1(pair, uniform_grid(0.0, 1.0, 1e-2));
  ASSERT_TRUE(r.ok);
  EXPECT_EQ(r.epsilon, 0.5);
}

TEST(ValidateG1, DerivativeFunnelTooNarrow)
{
  FunnelPair pair{BoundaryFunction::exponential(3, 2, 0.1), BoundaryFunction::constant(0.05)};
  const auto r = validate_g1(pair, uniform_grid(0.0, 7.0, 1e-3));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_boundary, -1);
  EXPECT_EQ(r.violation_time, 0.0);
  EXPECT_EQ(pair.epsilon, 0.0);
}

TEST(ValidateG1, PropagatesG0Failure)
{
  FunnelPair pair{BoundaryFunction::constant(1.0), BoundaryFunction::constant(-1.0)};
  const auto r = validate_g1(pair, uniform_grid(0.0, 1.0, 0.1));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_boundary, 1);
}

// psi1 = kappa (6 e^-t + 0.1) is accepted iff it stays strictly above -psi0' = 6 e^-2t
// at every grid point; brute-force oracle over the same grid.
TEST(ValidateG1, ScaledDerivativeFunnelMatchesBruteForce)
{
  const auto grid = uniform_grid(0.0, 7.0, 1e-2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> scale(0.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    const double kappa = scale(rng);
    bool oracle_ok = true;
    for (const double t : grid) {
      oracle_ok = oracle_ok && kappa * (6.0 * std::exp(-t) + 0.1) - 6.0 * std::exp(-2.0 * t) > 0.0;
    }
    FunnelPair pair{BoundaryFunction::exponential(3, 2, 0.1),
                    BoundaryFunction::exponential(6.0 * kappa, 1.0, 0.1 * kappa)};
    EXPECT_EQ(validate_g1(pair, grid).ok, oracle_ok) << "kappa=" << kappa;
  }
}

TEST(InFunnel, BenchmarkInitialError)
{
  const auto m = in_funnel(benchmark_funnels(), 0.0, -1.0, 0.0);
  ASSERT_TRUE(m.inside);
  EXPECT_DOUBLE_EQ(m.margins[0], 2.1);
  EXPECT_DOUBLE_EQ(m.margins[1], 6.1);
}

TEST(InFunnel, BoundaryIsOutside)
{
  const auto m = in_funnel(benchmark_funnels(), 0.0, 3.1, 0.0);
  EXPECT_FALSE(m.inside);
  EXPECT_EQ(m.outside_index, 0);
}

TEST(InFunnel, DerivativeFunnelExceeded)
{
  const auto m = in_funnel(benchmark_funnels(), 0.0, 0.0, 6.2);
  EXPECT_FALSE(m.inside);
  EXPECT_EQ(m.outside_index, 1);
}

TEST(InFunnel, FirstFunnelReportedFirst)
{
  EXPECT_EQ(in_funnel(benchmark_funnels(), 0.0, 10.0, 10.0).outside_index, 0);
}

TEST(BoundaryProperties, DerivativeMatchesCentralDifferences)
{
  const BoundaryFunction boundaries[] = {
      BoundaryFunction::exponential(3, 2, 0.1), BoundaryFunction::exponential(6, 1, 0.1),
      BoundaryFunction::exponential(1, 1, 0), BoundaryFunction::exponential(0.5, 4, 2),
      BoundaryFunction::constant(0.1)};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> time(0.0, 10.0);
  constexpr double h = 1e-5;
  for (const auto& b : boundaries) {
    for (int i = 0; i < 1000; ++i) {
      const double t = std::max(h, time(rng));
      const double fd = (b.value(t + h) - b.value(t - h)) / (2.0 * h);
      const double d = b.derivative(t);
      ASSERT_LE(std::abs(fd - d), 1e-6 * (1.0 + std::abs(d))) << "t=" << t;
    }
  }
}

TEST(InFunnelProperties, ShrinkingErrorsNeverLeaves)
{
  const auto pair = benchmark_funnels();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> time(0.0, 7.0), err(-7.0, 7.0), shrink(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double t = time(rng);
    const double e0 = err(rng), e1 = err(rng);
    if (!in_funnel(pair, t, e0, e1).inside) continue;
    EXPECT_TRUE(in_funnel(pair, t, e0 * shrink(rng), e1 * shrink(rng)).inside);
  }
}

}  // namespace
}  // namespace fmpc
