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

#ifndef FMPC_OCP_HPP_
#define FMPC_OCP_HPP_

/**
 * @file
 * @brief Finite-horizon optimal control problem solved by direct single shooting.
 *
 * The decision variable is a piecewise-constant input with N = horizon / control_step
 * levels, each clamped to [-bound, bound]. The objective is the running stage
 * cost of the fixed-step RK4 prediction from the measured state.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmpc/cost.hpp"
#include "fmpc/plant.hpp"
#include "fmpc/sim.hpp"

namespace fmpc {

struct OcpProblem
{
  PlantModel plant;
  StageCostSpec cost;
  double t_hat = 0.0;
  State x_hat;
  double horizon = 0.0;
  double control_step = 0.0;
  double bound = 0.0;

  /// Number of control intervals N. Throws std::invalid_argument if the
  /// horizon is not an integer multiple of the control step.
  std::size_t intervals() const;
  void validate() const;
};

struct SolverOptions
{
  int max_iterations = 200;
  double gradient_tolerance = 1e-6;
  double decrease_tolerance = 1e-9;
  /// Forward-difference step is fd_relative_step * max(1, bound).
  double fd_relative_step = 1e-6;
  double armijo = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 60;
  int substeps = 4;
  /// Extra uniformly random starting iterates (0 disables multi-start).
  int random_starts = 0;
  std::uint64_t seed = 0;
};

struct SolverStats
{
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string termination;
  /// Objective at each starting iterate, in the order tried.
  std::vector<double> start_costs;
};

struct OcpSolution
{
  ControlSequence controls;
  double cost_value = 0.0;
  bool feasible = false;
  Trajectory predicted;
  SolverStats stats;
};

/// Objective of the OCP at the given control levels (fixed-step prediction).
/// Divergent predictions are reported infeasible with an infinite value.
RunningCost ocp_objective(const OcpProblem& p, std::span<const double> levels, int substeps,
                          Trajectory* predicted = nullptr);

/**
 * Minimizes the OCP by projected gradient descent.
 *
 * Starting iterates are tried in order: warm_start (if given), the zero
 * sequence, then any random starts. The best final iterate is returned.
 * Throws std::runtime_error if every evaluation diverged.
 */
OcpSolution solve_ocp(const OcpProblem& p, const std::optional<ControlSequence>& warm_start,
                      const SolverOptions& opts = {});

struct Admissibility
{
  bool yes = false;
  /// Minimum funnel margins over the horizon.
  std::array<double, 2> margins{};
  double violation_time = 0.0;
  /// "bound", "funnel0", "funnel1" or an integrator diagnostic.
  std::string which;

  explicit operator bool() const { return yes; }
};

/**
 * Membership of u in the admissible control set: |u_k| < bound strictly, and
 * the adaptive-integrator response keeps error and error derivative inside
 * both funnels at every sample.
 */
Admissibility admissible(const OcpProblem& p, const ControlSequence& u,
                         const AdaptiveOptions& integrator = {});

/// Drops the first `shift` levels and repeats the last one to keep the length.
ControlSequence shift_warm_start(const ControlSequence& prev, std::size_t shift);

}  // namespace fmpc

#endif  // FMPC_OCP_HPP_
