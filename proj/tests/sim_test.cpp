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
#include <numbers>

#include "fmpc/sim.hpp"
#include "test_util.hpp"

namespace fmpc {
namespace {

using testing::benchmark_plant;
using testing::constant_input;
using testing::harmonic_oscillator;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

State unit_x1()
{
  State x(2);
  x << 1.0, 0.0;
  return x;
}

double oscillator_period_error(int intervals, int substeps)
{
  const auto traj = integrate_fixed(harmonic_oscillator(), unit_x1(),
                                    constant_input(0.0, kTwoPi / intervals, intervals, 0.0), substeps);
  return (traj.states.back() - unit_x1()).norm();
}

TEST(ControlSequence, LevelLookupIsRightContinuous)
{
  const ControlSequence u{1.0, 0.1, {1.0, 2.0, 3.0}, 5.0};
  EXPECT_EQ(u.level_at(0.5), 1.0);
  EXPECT_EQ(u.level_at(1.0), 1.0);
  EXPECT_EQ(u.level_at(1.1), 2.0);
  EXPECT_EQ(u.level_at(1.2), 3.0);
  EXPECT_EQ(u.level_at(1.3), 3.0);
  EXPECT_NEAR(u.span(), 0.3, 1e-15);
  EXPECT_THROW((ControlSequence{0, 0.1, {6.0}, 5.0}.validate()), std::invalid_argument);
  EXPECT_THROW((ControlSequence{0, 0.0, {1.0}, 5.0}.validate()), std::invalid_argument);
  EXPECT_THROW((ControlSequence{0, 0.1, {}, 5.0}.validate()), std::invalid_argument);
}

TEST(IntegrateFixed, EquilibriumStaysZero)
{
  const auto traj = integrate_fixed(benchmark_plant(), State::Zero(4), constant_input(0.0, 0.04, 25, 0.0));
  ASSERT_EQ(traj.size(), 25u * 4u + 1u);
  for (const auto& x : traj.states) EXPECT_EQ(x, State::Zero(4));
  EXPECT_NEAR(traj.times.back(), 1.0, 1e-15);
}

TEST(IntegrateFixed, OscillatorPeriod)
{
  // 100 intervals x 63 substeps: step 9.97e-4.
  EXPECT_LT(oscillator_period_error(100, 63), 1e-8);
}

TEST(IntegrateFixed, FourthOrderConvergence)
{
  const double coarse = oscillator_period_error(50, 1);
  const double fine = oscillator_period_error(50, 2);
  EXPECT_NEAR(coarse / fine, 16.0, 3.0);
}

TEST(IntegrateFixed, ShortPushAgainstAdaptiveOracle)
{
  const auto pm = benchmark_plant();
  const auto u = constant_input(0.0, 0.04, 1, 1.0);
  const auto fixed = integrate_fixed(pm, State::Zero(4), u, 4);
  const auto oracle = integrate_adaptive(pm, State::Zero(4), u, {1e-12, 1e-14, 1e-3});
  const double y = fixed.outputs.back();
  EXPECT_GT(y, 0.0);
  EXPECT_LT(y, 1e-3);
  EXPECT_NEAR(y, oracle.outputs.back(), 1e-10);
}

TEST(IntegrateFixed, SamplesAreConsistentAndReproducible)
{
  const auto pm = benchmark_plant();
  State x0(4);
  x0 << 0.1, -0.2, 0.3, 0.4;
  const ControlSequence u{0.5, 0.04, {3.0, -2.0, 10.0, 0.0, -7.5}, 30.0};
  const auto a = integrate_fixed(pm, x0, u);
  const auto b = integrate_fixed(pm, x0, u);
  ASSERT_EQ(a.size(), 21u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.states[i], b.states[i]);
    EXPECT_NEAR(a.outputs[i], pm.h(a.states[i]), 1e-12);
    const double rate = pm.h_grad(a.states[i]).dot(pm.rate(a.states[i], a.inputs[i]));
    EXPECT_NEAR(a.output_rates[i], rate, 1e-12);
    EXPECT_EQ(a.inputs[i], u.level_at(a.times[i]));
    if (i > 0) EXPECT_GT(a.times[i], a.times[i - 1]);
  }
}

TEST(IntegrateFixed, DivergenceCarriesLastFiniteTime)
{
  PlantModel blowup = testing::single_integrator();
  blowup.f = [](const State& x) { return State(x.array().square().matrix() * 1e3); };
  State x0 = State::Constant(1, 1.0);
  try {
    integrate_fixed(blowup, x0, constant_input(0.0, 0.01, 100, 0.0), 1);
    FAIL() << "expected divergence";
  } catch (const IntegrationError& err) {
    EXPECT_EQ(err.kind(), IntegrationError::Kind::kDivergence);
    EXPECT_GE(err.last_time(), 0.0);
    EXPECT_LT(err.last_time(), 1.0);
  }
  EXPECT_THROW(integrate_fixed(blowup, x0, constant_input(0.0, 0.01, 1, 0.0), 0),
               std::invalid_argument);
}

TEST(IntegrateAdaptive, OscillatorPeriod)
{
  const auto traj =
      integrate_adaptive(harmonic_oscillator(), unit_x1(), constant_input(0.0, kTwoPi, 1, 0.0));
  EXPECT_LT((traj.states.back() - unit_x1()).norm(), 1e-7);
  EXPECT_EQ(traj.times.back(), kTwoPi);
}

TEST(IntegrateAdaptive, EquilibriumStaysZero)
{
  const auto traj = integrate_adaptive(benchmark_plant(), State::Zero(4), constant_input(0.0, 7.0, 1, 0.0));
  for (const auto& x : traj.states) EXPECT_LE(x.lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(IntegrateAdaptive, DampedSpringDecays)
{
  const auto pm = benchmark_plant();
  State x0(4);
  x0 << 0, 1, 0, 0;
  const auto u = constant_input(0.0, 20.0, 1, 0.0);
  const auto adaptive = integrate_adaptive(pm, x0, u);
  const auto oracle = integrate_fixed(pm, x0, u, 2'000'000);
  EXPECT_LT(std::abs(adaptive.states.back()[1]), 0.05);
  EXPECT_LT((adaptive.states.back() - oracle.states.back()).norm(), 1e-6);
}

TEST(IntegrateAdaptive, NoStepStraddlesAControlSwitch)
{
  const auto pm = benchmark_plant();
  const ControlSequence u{0.0, 0.04, {5, -5, 20, 0, -30, 30, 1, 2, 3, 4}, 30.0};
  const auto traj = integrate_adaptive(pm, State::Zero(4), u);
  for (std::size_t k = 0; k <= u.size(); ++k) {
    const double boundary = u.boundary(k);
    EXPECT_NE(std::find(traj.times.begin(), traj.times.end(), boundary), traj.times.end())
        << "boundary " << boundary << " not sampled";
  }
  for (std::size_t i = 1; i < traj.size(); ++i) {
    ASSERT_GT(traj.times[i], traj.times[i - 1]);
    ASSERT_LE(traj.times[i] - traj.times[i - 1], 0.01 + 1e-15);
    for (std::size_t k = 1; k < u.size(); ++k) {
      const double b = u.boundary(k);
      EXPECT_FALSE(traj.times[i - 1] < b && b < traj.times[i]);
    }
    EXPECT_EQ(traj.inputs[i], u.level_at(traj.times[i]));
  }
}

TEST(IntegrateAdaptive, AgreesWithFixedStepOnBenchmarkFirstSecond)
{
  const auto pm = benchmark_plant();
  ControlSequence u{0.0, 0.04, {}, 30.0};
  for (int k = 0; k < 25; ++k) u.values.push_back(15.0 * std::sin(0.7 * k));
  const auto fixed = integrate_fixed(pm, State::Zero(4), u, 4);
  const auto adaptive = integrate_adaptive(pm, State::Zero(4), u);
  EXPECT_NEAR(fixed.outputs.back(), adaptive.outputs.back(), 1e-6);
  EXPECT_NEAR(fixed.output_rates.back(), adaptive.output_rates.back(), 1e-6);
}

TEST(IntegrateAdaptive, BenchmarkFixedStepConvergenceOrder)
{
  // u = 1 over one control interval of 0.4 s, reference from a tight adaptive run.
  const auto pm = benchmark_plant();
  State x0(4);
  x0 << 0.0, 1.0, 0.5, -1.0;
  const auto u = constant_input(0.0, 0.4, 1, 1.0);
  const auto ref = integrate_adaptive(pm, x0, u, {1e-12, 1e-14, 1e-3});
  const double coarse = (integrate_fixed(pm, x0, u, 4).states.back() - ref.states.back()).norm();
  const double fine = (integrate_fixed(pm, x0, u, 8).states.back() - ref.states.back()).norm();
  EXPECT_NEAR(coarse / fine, 16.0, 3.0) << coarse << " " << fine;
}

TEST(IntegrateAdaptive, RejectsBadOptions)
{
  const auto u = constant_input(0.0, 1.0, 1, 0.0);
  EXPECT_THROW(integrate_adaptive(benchmark_plant(), State::Zero(4), u, {0.0, 1e-10, 0.01}),
               std::invalid_argument);
  EXPECT_THROW(integrate_adaptive(benchmark_plant(), State::Zero(4), u, {1e-8, 1e-10, 0.0}),
               std::invalid_argument);
}

TEST(IntegrateAdaptive, FiniteTimeBlowUpIsReported)
{
  PlantModel blowup = testing::single_integrator();
  blowup.f = [](const State& x) { return State(x.array().square().matrix()); };
  EXPECT_THROW(integrate_adaptive(blowup, State::Constant(1, 1.0), constant_input(0.0, 2.0, 1, 0.0)),
               IntegrationError);
}

TEST(Trajectory, SpliceDropsDuplicateBoundarySample)
{
  const auto pm = benchmark_plant();
  const auto a = integrate_fixed(pm, State::Zero(4), constant_input(0.0, 0.04, 1, 1.0));
  const auto b = integrate_fixed(pm, a.states.back(), constant_input(0.04, 0.04, 1, -2.0));
  Trajectory joined = a;
  joined.splice(b);
  ASSERT_EQ(joined.size(), a.size() + b.size() - 1);
  EXPECT_EQ(joined.times[4], 0.04);
  EXPECT_EQ(joined.inputs[4], -2.0);
  EXPECT_EQ(joined.states[4], a.states.back());
}

}  // namespace
}  // namespace fmpc
