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

#ifndef FMPC_MPC_HPP_
#define FMPC_MPC_HPP_

/**
 * @file
 * @brief Receding-horizon funnel MPC loop.
 *
 * At each update time t_hat = t0 + k shift the state is read, the OCP over
 * [t_hat, t_hat + horizon] is solved, and its first control level is applied
 * to the plant for one shift using the adaptive integrator.
 */

#include <array>
#include <string>
#include <vector>

#include "fmpc/cost.hpp"
#include "fmpc/funnel.hpp"
#include "fmpc/ocp.hpp"
#include "fmpc/plant.hpp"
#include "fmpc/sim.hpp"

namespace fmpc {

struct FmpcConfig
{
  double horizon = 0.6;
  double shift = 0.04;
  double bound = 30.0;
  double lambda_u = 5e-3;
  CostScheme scheme = CostScheme::kTwoFunnel;
  double t0 = 0.0;
  State x0 = State::Zero(4);
  double t_end = 7.0;
  double cap = 1e8;
  double violation_weight = 1e6;
  bool warm_start = true;
  SolverOptions solver;
  AdaptiveOptions integrator;

  /// All invariant violations, empty when valid.
  std::vector<std::string> validate() const;
};

struct InitialFeasibility
{
  bool feasible = false;
  std::array<double, 2> margins{};
  int which = -1;  // failing funnel

  explicit operator bool() const { return feasible; }
};

/// Checks that the initial error and error derivative lie strictly inside both funnels.
InitialFeasibility check_initial_feasibility(const FunnelPair& funnels, const ReferenceSignal& ref,
                                             const PlantModel& pm, double t0, const State& x0);

struct StepRecord
{
  double t_hat = 0.0;
  State x_hat;
  OcpSolution solution;
  double wall_time = 0.0;  // seconds spent in solve_ocp
  /// Minimum funnel margins over the applied segment.
  std::array<double, 2> margins{};
  bool segment_inside = false;
};

struct ClosedLoopRun
{
  CostScheme scheme = CostScheme::kTwoFunnel;
  Trajectory trajectory;
  std::vector<StepRecord> steps;
  bool feasible_throughout = true;
  /// Non-empty when the run aborted early.
  std::string error;
};

/// Builds the stage-cost spec a run with this configuration optimizes.
StageCostSpec make_cost_spec(const FmpcConfig& cfg, const FunnelPair& funnels,
                             const ReferenceSignal& ref);

/// OCP at (t_hat, x_hat) for this configuration.
OcpProblem make_problem(const FmpcConfig& cfg, const PlantModel& pm, const FunnelPair& funnels,
                        const ReferenceSignal& ref, double t_hat, const State& x_hat);

/**
 * Runs the closed loop over [cfg.t0, cfg.t_end].
 *
 * Throws std::invalid_argument if the configuration is invalid, the funnels
 * fail the coupling check, or the initial state is outside the funnels. An
 * integrator failure ends the run early with `error` set.
 */
ClosedLoopRun run_fmpc(const FmpcConfig& cfg, const PlantModel& pm, const FunnelPair& funnels,
                       const ReferenceSignal& ref);

struct AuditEntry
{
  double t_hat = 0.0;
  State x_hat;
  ControlSequence controls;
  bool feasible = false;
  double cost_value = 0.0;
};

struct AuditViolation
{
  std::size_t step = 0;
  double t_hat = 0.0;
  std::string reason;
};

struct AuditReport
{
  std::size_t steps_checked = 0;
  std::vector<AuditViolation> violations;

  bool ok() const { return violations.empty(); }
};

/// Re-checks every stored solution for a finite cost and admissibility.
/// `problem_template` supplies plant, cost, horizon and bound; t_hat and x_hat
/// are taken from each entry.
AuditReport audit_recursive_feasibility(std::span<const AuditEntry> entries,
                                        const OcpProblem& problem_template,
                                        const AdaptiveOptions& integrator = {});
AuditReport audit_recursive_feasibility(const ClosedLoopRun& run,
                                        const OcpProblem& problem_template,
                                        const AdaptiveOptions& integrator = {});

}  // namespace fmpc

#endif  // FMPC_MPC_HPP_
