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

#ifndef FMPC_EXPERIMENT_HPP_
#define FMPC_EXPERIMENT_HPP_

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fmpc/config.hpp"
#include "fmpc/mpc.hpp"

namespace fmpc {

/// Column order of the per-sample CSV.
inline constexpr const char* kCsvHeader =
    "t,y,y_ref,e,psi0,ydot,yref_dot,edot,psi1,u,stage_cost,feasible_step";

struct SchemeSummary
{
  CostScheme scheme = CostScheme::kTwoFunnel;
  bool completed = false;
  std::string error;
  std::size_t steps = 0;
  std::size_t infeasible_steps = 0;
  bool feasible_throughout = false;
  bool psi0_respected = false;
  bool psi1_respected = false;
  double min_margin0 = 0.0;
  double min_margin1 = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double max_abs_u = 0.0;
  double wall_time = 0.0;
};

SchemeSummary summarize(const ClosedLoopRun& run, const FunnelPair& funnels,
                        const ReferenceSignal& ref);
nlohmann::json to_json(const SchemeSummary& s);

/// One row per trajectory sample, floats at 17 significant digits.
void emit_csv(const ClosedLoopRun& run, const StageCostSpec& spec, std::ostream& out);
void emit_csv(const ClosedLoopRun& run, const StageCostSpec& spec,
              const std::filesystem::path& path);

/// Per-step solver log: t_hat, x_hat, controls, cost, feasibility, stats, wall time.
nlohmann::json run_log(const ClosedLoopRun& run);
/// Inverse of run_log for the fields the audit needs.
std::vector<AuditEntry> audit_entries_from_log(const nlohmann::json& log);

struct ExperimentResult
{
  std::vector<ClosedLoopRun> runs;
  std::vector<SchemeSummary> summaries;
};

/**
 * Runs every configured scheme (concurrently) and writes into `out_dir`:
 * config.json, <scheme>.csv, <scheme>_log.json and summary.json.
 *
 * Throws std::invalid_argument("nothing to run") for an empty scheme list.
 */
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace fmpc

#endif  // FMPC_EXPERIMENT_HPP_
