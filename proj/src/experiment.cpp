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

#include "fmpc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fmpc {

using nlohmann::json;

SchemeSummary summarize(const ClosedLoopRun& run, const FunnelPair& funnels,
                        const ReferenceSignal& ref)
{
  SchemeSummary s;
  s.scheme = run.scheme;
  s.completed = run.error.empty();
  s.error = run.error;
  s.steps = run.steps.size();
  s.feasible_throughout = run.feasible_throughout;
  s.min_margin0 = std::numeric_limits<double>::infinity();
  s.min_margin1 = std::numeric_limits<double>::infinity();
  s.u_min = std::numeric_limits<double>::infinity();
  s.u_max = -std::numeric_limits<double>::infinity();
  for (const auto& step : run.steps) {
    s.infeasible_steps += step.solution.feasible ? 0 : 1;
    s.wall_time += step.wall_time;
  }
  const Trajectory& tr = run.trajectory;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.times[i];
    const auto m = in_funnel(funnels, t, tr.outputs[i] - ref.value(t), tr.output_rates[i] - ref.rate(t));
    s.min_margin0 = std::min(s.min_margin0, m.margins[0]);
    s.min_margin1 = std::min(s.min_margin1, m.margins[1]);
  }
  // Applied inputs are the first levels of each step's solution.
  for (const auto& step : run.steps) {
    const double u = step.solution.controls.values.front();
    s.u_min = std::min(s.u_min, u);
    s.u_max = std::max(s.u_max, u);
    s.max_abs_u = std::max(s.max_abs_u, std::abs(u));
  }
  if (run.steps.empty()) {
    s.u_min = s.u_max = 0.0;
  }
  s.psi0_respected = s.min_margin0 > 0.0;
  s.psi1_respected = s.min_margin1 > 0.0;
  return s;
}

json to_json(const SchemeSummary& s)
{
  return json{{"scheme", std::string(to_string(s.scheme))},
              {"completed", s.completed},
              {"error", s.error},
              {"steps", s.steps},
              {"infeasible_steps", s.infeasible_steps},
              {"feasible_throughout", s.feasible_throughout},
              {"psi0_respected", s.psi0_respected},
              {"psi1_respected", s.psi1_respected},
              {"min_margin0", s.min_margin0},
              {"min_margin1", s.min_margin1},
              {"u_min", s.u_min},
              {"u_max", s.u_max},
              {"max_abs_u", s.max_abs_u},
              {"solver_wall_time", s.wall_time}};
}

namespace {

void write_number(std::ostream& out, double v)
{
  if (std::isinf(v)) {
    out << (v > 0 ? "inf" : "-inf");
  } else if (std::isnan(v)) {
    out << "nan";
  } else {
    out << v;
  }
}

}  // namespace

void emit_csv(const ClosedLoopRun& run, const StageCostSpec& spec, std::ostream& out)
{
  const auto old_precision = out.precision(17);
  out << kCsvHeader << '\n';
  const Trajectory& tr = run.trajectory;
  const auto& ref = spec.reference;
  std::size_t step = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.times[i];
    while (step + 1 < run.steps.size() && t >= run.steps[step + 1].t_hat) ++step;
    const bool step_feasible = run.steps.empty() ? true : run.steps[step].solution.feasible;

    const double y_ref = ref.value(t);
    const double yref_dot = ref.rate(t);
    const double e = tr.outputs[i] - y_ref;
    const double edot = tr.output_rates[i] - yref_dot;
    const auto cost = stage_cost(spec, t, tr.outputs[i], tr.output_rates[i], tr.inputs[i]);
    const double row[] = {t,    tr.outputs[i], y_ref, e, spec.funnels.psi0.value(t), tr.output_rates[i],
                          yref_dot, edot, spec.funnels.psi1.value(t), tr.inputs[i], cost.value};
    for (const double v : row) {
      write_number(out, v);
      out << ',';
    }
    out << (step_feasible ? 1 : 0) << '\n';
  }
  out.precision(old_precision);
}

void emit_csv(const ClosedLoopRun& run, const StageCostSpec& spec, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  emit_csv(run, spec, out);
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

namespace {

json state_json(const State& x)
{
  json arr = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) arr.push_back(x[i]);
  return arr;
}

State state_from(const json& arr)
{
  State x(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) x[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  return x;
}

// JSON has no infinity; infeasible surrogates stay finite, divergence is stored as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_json(const json& doc, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << std::setprecision(17) << doc.dump(2) << '\n';
}

}  // namespace

json run_log(const ClosedLoopRun& run)
{
  json steps = json::array();
  for (const auto& rec : run.steps) {
    const auto& sol = rec.solution;
    steps.push_back({{"t_hat", rec.t_hat},
                     {"x_hat", state_json(rec.x_hat)},
                     {"control_step", sol.controls.step},
                     {"bound", sol.controls.bound},
                     {"controls", sol.controls.values},
                     {"cost", finite_or_null(sol.cost_value)},
                     {"feasible", sol.feasible},
                     {"iterations", sol.stats.iterations},
                     {"evaluations", sol.stats.evaluations},
                     {"converged", sol.stats.converged},
                     {"termination", sol.stats.termination},
                     {"wall_time", rec.wall_time},
                     {"segment_inside", rec.segment_inside},
                     {"margins", {rec.margins[0], rec.margins[1]}}});
  }
  return json{{"scheme", std::string(to_string(run.scheme))},
              {"feasible_throughout", run.feasible_throughout},
              {"error", run.error},
              {"steps", steps}};
}

std::vector<AuditEntry> audit_entries_from_log(const json& log)
{
  std::vector<AuditEntry> entries;
  for (const auto& s : log.at("steps")) {
    AuditEntry e;
    e.t_hat = s.at("t_hat").get<double>();
    e.x_hat = state_from(s.at("x_hat"));
    e.controls.t_start = e.t_hat;
    e.controls.step = s.at("control_step").get<double>();
    e.controls.bound = s.at("bound").get<double>();
    e.controls.values = s.at("controls").get<std::vector<double>>();
    e.feasible = s.at("feasible").get<bool>();
    const json& cost = s.at("cost");
    e.cost_value = cost.is_null() ? std::numeric_limits<double>::infinity() : cost.get<double>();
    entries.push_back(std::move(e));
  }
  return entries;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir)
{
  if (cfg.schemes.empty()) {
    throw std::invalid_argument("nothing to run");
  }
  if (const auto errors = validate(cfg); !errors.empty()) {
    throw ConfigError(errors);
  }
  std::filesystem::create_directories(out_dir);
  write_json(to_json(cfg), out_dir / "config.json");

  const PlantModel pm = build_plant(cfg);
  const ReferenceSignal ref = build_reference(cfg);
  const FunnelPair funnels = build_funnels(cfg);

  std::vector<std::future<ClosedLoopRun>> pending;
  for (const auto scheme : cfg.schemes) {
    FmpcConfig c = cfg.controller;
    c.scheme = scheme;
    pending.push_back(std::async(std::launch::async, [c, &pm, &funnels, &ref] {
      return run_fmpc(c, pm, funnels, ref);
    }));
  }

  ExperimentResult result;
  json summary = json::array();
  for (std::size_t i = 0; i < pending.size(); ++i) {
    ClosedLoopRun run = pending[i].get();
    FmpcConfig c = cfg.controller;
    c.scheme = cfg.schemes[i];
    const std::string name(to_string(c.scheme));
    emit_csv(run, make_cost_spec(c, funnels, ref), out_dir / (name + ".csv"));
    write_json(run_log(run), out_dir / (name + "_log.json"));
    result.summaries.push_back(summarize(run, funnels, ref));
    summary.push_back(to_json(result.summaries.back()));
    result.runs.push_back(std::move(run));
  }
  write_json(summary, out_dir / "summary.json");
  return result;
}

}  // namespace fmpc
