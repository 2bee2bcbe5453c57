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

#ifndef FMPC_TESTS_TEST_UTIL_HPP_
#define FMPC_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <random>
#include <vector>

#include "fmpc/funnel.hpp"
#include "fmpc/mpc.hpp"
#include "fmpc/plant.hpp"

namespace fmpc::testing {

/// psi0 = 3 exp(-2t) + 0.1, psi1 = 6 exp(-t) + 0.1
inline FunnelPair benchmark_funnels()
{
  return FunnelPair{BoundaryFunction::exponential(3.0, 2.0, 0.1),
                    BoundaryFunction::exponential(6.0, 1.0, 0.1)};
}

/// m1=4, m2=1, k=2, d=1, theta=pi/4
inline PlantModel benchmark_plant() { return mass_on_car(MassOnCarParams{}); }

/// x1' = x2, x2' = -x1 + u, y = x1
inline PlantModel harmonic_oscillator()
{
  PlantModel pm;
  pm.name = "harmonic_oscillator";
  pm.n = 2;
  pm.f = [](const State& x) {
    State dx(2);
    dx << x[1], -x[0];
    return dx;
  };
  pm.g = [](const State&) {
    State gx(2);
    gx << 0.0, 1.0;
    return gx;
  };
  pm.h = [](const State& x) { return x[0]; };
  pm.h_grad = [](const State&) {
    Eigen::RowVectorXd grad(2);
    grad << 1.0, 0.0;
    return grad;
  };
  return pm;
}

/// x' = u, y = x
inline PlantModel single_integrator()
{
  PlantModel pm;
  pm.name = "single_integrator";
  pm.n = 1;
  pm.f = [](const State&) { return State::Zero(1); };
  pm.g = [](const State&) { return State::Ones(1); };
  pm.h = [](const State& x) { return x[0]; };
  pm.h_grad = [](const State&) { return Eigen::RowVectorXd::Ones(1); };
  return pm;
}

inline ControlSequence constant_input(double t_start, double step, std::size_t n, double level,
                                      double bound = 1e9)
{
  return ControlSequence{t_start, step, std::vector<double>(n, level), bound};
}

inline State random_state(std::mt19937_64& rng, int n, double radius)
{
  std::uniform_real_distribution<double> coord(-radius, radius);
  State x(n);
  for (int i = 0; i < n; ++i) x[i] = coord(rng);
  return x;
}

/// Benchmark configuration with the given scheme over [0, t_end].
inline FmpcConfig benchmark_config(CostScheme scheme, double t_end)
{
  FmpcConfig cfg;
  cfg.scheme = scheme;
  cfg.t_end = t_end;
  return cfg;
}

}  // namespace fmpc::testing

#endif  // FMPC_TESTS_TEST_UTIL_HPP_
