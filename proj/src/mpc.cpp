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

#include "fmpc/mpc.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace fmpc {

std::vector<std::string> FmpcConfig::validate() const
{
  std::vector<std::string> errors;
  if (!(shift > 0.0)) {
    errors.emplace_back("shift must be positive");
  }
  if (!(horizon > shift)) {
    errors.emplace_back("horizon must exceed shift");
  }
  if (shift > 0.0 && horizon > 0.0) {
    const double ratio = horizon / shift;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
      errors.emplace_back("horizon not a multiple of shift");
    }
  }
  if (!(bound > 0.0)) errors.emplace_back("bound must be positive");
  if (!(lambda_u >= 0.0)) errors.emplace_back("lambda_u must be non-negative");
  if (!(t0 >= 0.0)) errors.emplace_back("t0 must be non-negative");
  if (!(t_end >= t0)) errors.emplace_back("t_end must not precede t0");
  if (!(cap > 0.0)) errors.emplace_back("cap must be positive");
  if (!(violation_weight > 0.0)) errors.emplace_back("violation_weight must be positive");
  if (!x0.allFinite()) errors.emplace_back("x0 must be finite");
  if (solver.max_iterations < 0) errors.emplace_back("solver.max_iterations must be non-negative");
  if (solver.substeps < 1) errors.emplace_back("solver.substeps must be at least 1");
  if (!(solver.fd_relative_step > 0.0)) errors.emplace_back("solver.fd_relative_step must be positive");
  if (!(solver.shrink > 0.0 && solver.shrink < 1.0)) errors.emplace_back("solver.shrink must lie in (0, 1)");
  if (!(solver.armijo > 0.0 && solver.armijo < 1.0)) errors.emplace_back("solver.armijo must lie in (0, 1)");
  if (solver.random_starts < 0) errors.emplace_back("solver.random_starts must be non-negative");
  if (!(integrator.rtol > 0.0) || !(integrator.atol > 0.0)) {
    errors.emplace_back("integrator tolerances must be positive");
  }
  if (!(integrator.max_step > 0.0)) errors.emplace_back("integrator.max_step must be positive");
  return errors;
}

InitialFeasibility check_initial_feasibility(const FunnelPair& funnels, const ReferenceSignal& ref,
                                             const PlantModel& pm, double t0, const State& x0)
{
  // y' does not depend on u for relative degree two, so u = 0 is as good as any.
  const auto out = output_and_derivative(pm, x0, 0.0);
  const auto m = in_funnel(funnels, t0, out.y - ref.value(t0), out.y_dot - ref.rate(t0));
  return {m.inside, m.margins, m.outside_index};
}

StageCostSpec make_cost_spec(const FmpcConfig& cfg, const FunnelPair& funnels,
                             const ReferenceSignal& ref)
{
  StageCostSpec spec;
  spec.scheme = cfg.scheme;
  spec.funnels = funnels;
  spec.lambda_u = cfg.lambda_u;
  spec.reference = ref;
  spec.cap = cfg.cap;
  spec.violation_weight = cfg.violation_weight;
  return spec;
}

OcpProblem make_problem(const FmpcConfig& cfg, const PlantModel& pm, const FunnelPair& funnels,
                        const ReferenceSignal& ref, double t_hat, const State& x_hat)
{
  OcpProblem p;
  p.plant = pm;
  p.cost = make_cost_spec(cfg, funnels, ref);
  p.t_hat = t_hat;
  p.x_hat = x_hat;
  p.horizon = cfg.horizon;
  p.control_step = cfg.shift;
  p.bound = cfg.bound;
  return p;
}

namespace {

void segment_margins(const Trajectory& seg, const FunnelPair& funnels, const ReferenceSignal& ref,
                     StepRecord& rec)
{
  rec.margins = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  rec.segment_inside = true;
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const double t = seg.times[i];
    const auto m = in_funnel(funnels, t, seg.outputs[i] - ref.value(t),
                             seg.output_rates[i] - ref.rate(t));
    rec.margins[0] = std::min(rec.margins[0], m.margins[0]);
    rec.margins[1] = std::min(rec.margins[1], m.margins[1]);
    rec.segment_inside = rec.segment_inside && m.inside;
  }
}

}  // namespace

ClosedLoopRun run_fmpc(const FmpcConfig& cfg, const PlantModel& pm, const FunnelPair& funnels,
                       const ReferenceSignal& ref)
{
  if (const auto errors = cfg.validate(); !errors.empty()) {
    throw std::invalid_argument("run_fmpc: " + errors.front());
  }
  if (cfg.x0.size() != pm.n) {
    throw std::invalid_argument("run_fmpc: x0 has wrong dimension");
  }
  FunnelPair pair = funnels;
  const auto grid = uniform_grid(cfg.t0, cfg.t_end + cfg.horizon, 1e-3);
  if (!validate_g1(pair, grid)) {
    throw std::invalid_argument("run_fmpc: funnel pair fails the derivative coupling check");
  }
  if (!check_initial_feasibility(pair, ref, pm, cfg.t0, cfg.x0)) {
    throw std::invalid_argument("run_fmpc: initial state outside the funnels");
  }

  ClosedLoopRun run;
  run.scheme = cfg.scheme;
  run.trajectory.record(pm, cfg.t0, cfg.x0, 0.0);

  const auto step_count =
      static_cast<std::size_t>(std::max(0.0, std::ceil((cfg.t_end - cfg.t0) / cfg.shift - 1e-9)));
  State x = cfg.x0;
  std::optional<ControlSequence> warm;
  for (std::size_t k = 0; k < step_count; ++k) {
    StepRecord rec;
    rec.t_hat = cfg.t0 + static_cast<double>(k) * cfg.shift;
    rec.x_hat = x;

    const OcpProblem problem = make_problem(cfg, pm, pair, ref, rec.t_hat, x);
    const auto started = std::chrono::steady_clock::now();
    rec.solution = solve_ocp(problem, warm, cfg.solver);
    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    ControlSequence applied;
    applied.t_start = rec.t_hat;
    applied.step = std::min(cfg.shift, cfg.t_end - rec.t_hat);
    applied.values = {rec.solution.controls.values.front()};
    applied.bound = cfg.bound;

    Trajectory segment;
    try {
      segment = integrate_adaptive(pm, x, applied, cfg.integrator);
    } catch (const IntegrationError& err) {
      run.error = err.what();
      run.feasible_throughout = false;
      run.steps.push_back(std::move(rec));
      return run;
    }
    segment_margins(segment, pair, ref, rec);
    run.feasible_throughout =
        run.feasible_throughout && rec.solution.feasible && rec.segment_inside;

    // The segment's first sample carries the newly applied level (right-continuous input).
    run.trajectory.splice(segment);
    x = segment.states.back();
    if (cfg.warm_start) {
      warm = shift_warm_start(rec.solution.controls, 1);
    }
    run.steps.push_back(std::move(rec));
  }
  return run;
}

AuditReport audit_recursive_feasibility(std::span<const AuditEntry> entries,
                                        const OcpProblem& problem_template,
                                        const AdaptiveOptions& integrator)
{
  AuditReport report;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const AuditEntry& e = entries[k];
    ++report.steps_checked;
    if (!e.feasible || !std::isfinite(e.cost_value) || e.cost_value >= problem_template.cost.cap) {
      report.violations.push_back({k, e.t_hat, "OCP solution infeasible"});
      continue;
    }
    OcpProblem p = problem_template;
    p.t_hat = e.t_hat;
    p.x_hat = e.x_hat;
    const auto adm = admissible(p, e.controls, integrator);
    if (!adm) {
      report.violations.push_back(
          {k, e.t_hat, "not admissible (" + adm.which + " at t=" + std::to_string(adm.violation_time) + ")"});
    }
  }
  return report;
}

AuditReport audit_recursive_feasibility(const ClosedLoopRun& run,
                                        const OcpProblem& problem_template,
                                        const AdaptiveOptions& integrator)
{
  std::vector<AuditEntry> entries;
  entries.reserve(run.steps.size());
  for (const auto& rec : run.steps) {
    entries.push_back({rec.t_hat, rec.x_hat, rec.solution.controls, rec.solution.feasible,
                       rec.solution.cost_value});
  }
  return audit_recursive_feasibility(entries, problem_template, integrator);
}

}  // namespace fmpc
