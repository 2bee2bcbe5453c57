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

#include "fmpc/cost.hpp"

#include <cmath>
#include <stdexcept>

namespace fmpc {

std::string_view to_string(CostScheme scheme)
{
  switch (scheme) {
    case CostScheme::kTwoFunnel:
      return "two_funnel";
    case CostScheme::kOneFunnel:
      return "one_funnel";
  }
  return "unknown";
}

std::optional<CostScheme> parse_scheme(std::string_view name)
{
  if (name == "two_funnel") return CostScheme::kTwoFunnel;
  if (name == "one_funnel") return CostScheme::kOneFunnel;
  return std::nullopt;
}

namespace {

// 1 / (1 - e^2 / psi^2), or nullopt on/beyond the boundary.
std::optional<double> barrier(double e, double psi, double& overshoot)
{
  const double abs_e = std::abs(e);
  if (!(abs_e < psi)) {
    overshoot = std::isfinite(abs_e) ? abs_e - psi : HUGE_VAL;
    return std::nullopt;
  }
  const double ratio = e / psi;
  return 1.0 / (1.0 - ratio * ratio);
}

}  // namespace

StageCost stage_cost(const StageCostSpec& spec, double t, double zeta0, double zeta1, double u)
{
  const auto& ref = spec.reference;
  const double e0 = zeta0 - ref.value(t);
  StageCost out;
  out.finite = true;
  out.value = spec.lambda_u * u * u;

  const auto term0 = barrier(e0, spec.funnels.psi0.value(t), out.overshoot[0]);
  if (term0) {
    out.value += *term0;
  } else {
    out.finite = false;
  }
  if (spec.scheme == CostScheme::kTwoFunnel) {
    const double e1 = zeta1 - ref.rate(t);
    const auto term1 = barrier(e1, spec.funnels.psi1.value(t), out.overshoot[1]);
    if (term1) {
      out.value += *term1;
    } else {
      out.finite = false;
    }
  }
  if (!out.finite) {
    out.value = HUGE_VAL;
  }
  return out;
}

RunningCost running_cost(const StageCostSpec& spec, const Trajectory& traj)
{
  if (traj.empty()) {
    throw std::invalid_argument("running_cost: empty trajectory");
  }
  RunningCost result;
  result.feasible = true;
  double integral = 0.0;
  double overshoot_integral = 0.0;
  double weight_total = 0.0;

  const std::size_t count = traj.size();
  const auto sample = [&](std::size_t i, double u) {
    return stage_cost(spec, traj.times[i], traj.outputs[i], traj.output_rates[i], u);
  };
  const auto charge_overshoot = [&](const StageCost& c, double weight) {
    if (c.finite) return;
    overshoot_integral += weight * (c.overshoot[0] * c.overshoot[0] + c.overshoot[1] * c.overshoot[1]);
  };

  if (count == 1) {
    const auto c = sample(0, traj.inputs[0]);
    if (!c.finite) {
      result.feasible = false;
      result.first_violation_time = traj.times[0];
    }
  }
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double dt = traj.times[i + 1] - traj.times[i];
    const double level = traj.inputs[i];
    const auto left = sample(i, level);
    const auto right = sample(i + 1, level);
    if (result.feasible && !left.finite) {
      result.feasible = false;
      result.first_violation_time = traj.times[i];
    } else if (result.feasible && !right.finite) {
      result.feasible = false;
      result.first_violation_time = traj.times[i + 1];
    }
    if (result.feasible) {
      integral += 0.5 * dt * (left.value + right.value);
    }
    charge_overshoot(left, 0.5 * dt);
    charge_overshoot(right, 0.5 * dt);
    weight_total += dt;
  }

  if (result.feasible) {
    result.value = integral;
  } else {
    if (weight_total == 0.0) {
      const auto c = sample(0, traj.inputs[0]);
      overshoot_integral = c.overshoot[0] * c.overshoot[0] + c.overshoot[1] * c.overshoot[1];
    }
    result.value = spec.cap + spec.violation_weight * overshoot_integral;
  }
  return result;
}

}  // namespace fmpc
