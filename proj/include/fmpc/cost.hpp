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

#ifndef FMPC_COST_HPP_
#define FMPC_COST_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "fmpc/funnel.hpp"
#include "fmpc/plant.hpp"
#include "fmpc/sim.hpp"

namespace fmpc {

enum class CostScheme {
  kTwoFunnel,  ///< barrier on both the error and its derivative
  kOneFunnel,  ///< barrier on the error only
};

std::string_view to_string(CostScheme scheme);
std::optional<CostScheme> parse_scheme(std::string_view name);

struct StageCostSpec
{
  CostScheme scheme = CostScheme::kTwoFunnel;
  FunnelPair funnels;
  double lambda_u = 0.0;
  ReferenceSignal reference;
  /// Finite stand-in for an infinite running cost inside the optimizer.
  double cap = 1e8;
  /// Penalty per unit of time-integrated squared overshoot beyond the cap.
  double violation_weight = 1e6;
};

struct StageCost
{
  bool finite = false;
  double value = 0.0;
  /// max(0, |e_i| - psi_i(t)); zero for a funnel the scheme ignores.
  std::array<double, 2> overshoot{};
};

/**
 * Barrier stage cost
 *
 *   sum_i 1 / (1 - e_i^2 / psi_i(t)^2) + lambda_u u^2,   e_i = zeta_i - y_ref^(i)(t)
 *
 * summed over i = 0, 1 for the two-funnel scheme and i = 0 only for the
 * one-funnel scheme. Anything on or beyond a funnel boundary is infinite.
 */
StageCost stage_cost(const StageCostSpec& spec, double t, double zeta0, double zeta1, double u);

struct RunningCost
{
  bool feasible = false;
  /// Trapezoidal integral when feasible, otherwise the penalized surrogate.
  double value = 0.0;
  double first_violation_time = 0.0;
};

/**
 * Integrates the stage cost along a sampled trajectory with the trapezoidal
 * rule. Each segment [t_i, t_i+1] is charged the input level active on it.
 *
 * If any sample is outside a funnel the result is infeasible and its value is
 * cap + violation_weight * (integrated squared overshoot), which is larger
 * than any feasible cost and grows with the depth of the violation.
 * Throws std::invalid_argument for an empty trajectory.
 */
RunningCost running_cost(const StageCostSpec& spec, const Trajectory& traj);

}  // namespace fmpc

#endif  // FMPC_COST_HPP_
