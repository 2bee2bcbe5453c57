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

// Funnel MPC experiment runner.
//
//   fmpc run --config configs/paper_sec5.json [--output DIR] [--scheme both]
//   fmpc validate --config configs/paper_sec5.json
//   fmpc audit --run DIR
//
// Exit codes: 0 success, 1 validation failure, 2 runtime failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>

#include "fmpc/config.hpp"
#include "fmpc/experiment.hpp"
#include "fmpc/funnel.hpp"
#include "fmpc/mpc.hpp"
#include "fmpc/plant.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kRuntimeFailure = 2;

void print_errors(const fmpc::ConfigError& err)
{
  std::cerr << "config validation failed:\n";
  for (const auto& e : err.errors()) std::cerr << "  - " << e << '\n';
}

struct RunOverrides
{
  std::string config;
  std::optional<std::string> output;
  std::optional<std::string> scheme;
  std::optional<double> t_end;
  std::optional<double> horizon;
  std::optional<double> shift;
  std::optional<double> bound;
};

int cmd_run(const RunOverrides& o)
{
  fmpc::ExperimentConfig cfg;
  try {
    cfg = fmpc::load_config(o.config);
    if (o.output) cfg.output_dir = *o.output;
    if (o.t_end) cfg.controller.t_end = *o.t_end;
    if (o.horizon) cfg.controller.horizon = *o.horizon;
    if (o.shift) cfg.controller.shift = *o.shift;
    if (o.bound) cfg.controller.bound = *o.bound;
    if (o.scheme) {
      if (*o.scheme == "both") {
        cfg.schemes = {fmpc::CostScheme::kTwoFunnel, fmpc::CostScheme::kOneFunnel};
      } else if (const auto s = fmpc::parse_scheme(*o.scheme)) {
        cfg.schemes = {*s};
      } else {
        throw fmpc::ConfigError({"unknown scheme '" + *o.scheme + "'"});
      }
    }
    if (auto errors = fmpc::validate(cfg); !errors.empty()) {
      throw fmpc::ConfigError(std::move(errors));
    }
  } catch (const fmpc::ConfigError& err) {
    print_errors(err);
    return kValidationFailure;
  }
  if (cfg.schemes.empty()) {
    std::cerr << "nothing to run\n";
    return kValidationFailure;
  }

  try {
    const auto result = fmpc::run_experiment(cfg, cfg.output_dir);
    bool completed = true;
    std::cout << std::setprecision(6);
    for (const auto& s : result.summaries) {
      completed = completed && s.completed;
      std::cout << fmpc::to_string(s.scheme) << ": steps=" << s.steps
                << " infeasible_steps=" << s.infeasible_steps
                << " psi0 " << (s.psi0_respected ? "respected" : "VIOLATED")
                << " (min margin " << s.min_margin0 << ")"
                << " psi1 " << (s.psi1_respected ? "respected" : "VIOLATED")
                << " (min margin " << s.min_margin1 << ")"
                << " u in [" << s.u_min << ", " << s.u_max << "]"
                << " solver time " << s.wall_time << "s";
      if (!s.completed) std::cout << " ERROR: " << s.error;
      std::cout << '\n';
    }
    std::cout << "artifacts written to " << cfg.output_dir << '\n';
    return completed ? kOk : kRuntimeFailure;
  } catch (const fmpc::ConfigError& err) {
    print_errors(err);
    return kValidationFailure;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& err) {
    std::cerr << "runtime failure: " << err.what() << '\n';
    return kRuntimeFailure;
  }
}

int cmd_validate(const std::string& path)
{
  fmpc::ExperimentConfig cfg;
  try {
    cfg = fmpc::load_config(path);
  } catch (const fmpc::ConfigError& err) {
    print_errors(err);
    return kValidationFailure;
  }
  const auto& c = cfg.controller;
  const auto pm = fmpc::build_plant(cfg);
  const auto ref = fmpc::build_reference(cfg);
  auto funnels = fmpc::build_funnels(cfg);
  bool ok = true;
  std::cout << std::setprecision(10);

  const auto grid = fmpc::uniform_grid(c.t0, c.t_end + c.horizon, 1e-3);
  const auto g0a = fmpc::validate_g0(funnels.psi0, grid);
  const auto g0b = fmpc::validate_g0(funnels.psi1, grid);
  std::cout << "psi0 bounded away from zero: "
            << (g0a ? "ok, inf " + std::to_string(g0a.inf_value)
                    : "VIOLATED at t=" + std::to_string(g0a.violation_time))
            << '\n';
  std::cout << "psi1 bounded away from zero: "
            << (g0b ? "ok, inf " + std::to_string(g0b.inf_value)
                    : "VIOLATED at t=" + std::to_string(g0b.violation_time))
            << '\n';
  const auto g1 = fmpc::validate_g1(funnels, grid);
  std::cout << "derivative funnel coupling: "
            << (g1 ? "ok, epsilon " + std::to_string(g1.epsilon)
                   : "VIOLATED at t=" + std::to_string(g1.violation_time))
            << '\n';
  ok = ok && g0a && g0b && g1;

  const auto init = fmpc::check_initial_feasibility(funnels, ref, pm, c.t0, c.x0);
  std::cout << "initial state inside funnels: " << (init ? "ok" : "NO") << ", margins ("
            << init.margins[0] << ", " << init.margins[1] << ")\n";
  ok = ok && init;

  std::mt19937_64 rng(c.solver.seed);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::vector<fmpc::State> samples(100, fmpc::State(pm.n));
  for (auto& x : samples) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = coord(rng);
  }
  const auto rd = fmpc::lie_relative_degree_check(pm, samples);
  if (rd) {
    std::cout << "relative degree two: ok, L_g L_f h in [" << rd.gain_min << ", " << rd.gain_max << "]\n";
  } else {
    std::cout << "relative degree two: FAILED (" << rd.which << ")\n";
  }
  ok = ok && rd;
  return ok ? kOk : kValidationFailure;
}

int cmd_audit(const std::string& dir)
{
  namespace fs = std::filesystem;
  fmpc::ExperimentConfig cfg;
  try {
    cfg = fmpc::load_config(fs::path(dir) / "config.json");
  } catch (const fmpc::ConfigError& err) {
    print_errors(err);
    return kValidationFailure;
  }
  const auto pm = fmpc::build_plant(cfg);
  const auto ref = fmpc::build_reference(cfg);
  const auto funnels = fmpc::build_funnels(cfg);

  bool clean = true;
  bool found = false;
  try {
    for (const auto scheme : {fmpc::CostScheme::kTwoFunnel, fmpc::CostScheme::kOneFunnel}) {
      const fs::path log_path = fs::path(dir) / (std::string(fmpc::to_string(scheme)) + "_log.json");
      if (!fs::exists(log_path)) continue;
      found = true;
      std::ifstream in(log_path);
      const auto log = nlohmann::json::parse(in);
      const auto entries = fmpc::audit_entries_from_log(log);

      fmpc::FmpcConfig c = cfg.controller;
      c.scheme = scheme;
      const auto tmpl = fmpc::make_problem(c, pm, funnels, ref, c.t0, c.x0);
      const auto report = fmpc::audit_recursive_feasibility(entries, tmpl, c.integrator);
      std::cout << fmpc::to_string(scheme) << ": " << report.steps_checked << " steps checked, "
                << report.violations.size() << " violations\n";
      for (const auto& v : report.violations) {
        std::cout << "  step " << v.step << " t_hat=" << v.t_hat << ": " << v.reason << '\n';
      }
      clean = clean && report.ok();
    }
  } catch (const std::exception& err) {
    std::cerr << "runtime failure: " << err.what() << '\n';
    return kRuntimeFailure;
  }
  if (!found) {
    std::cerr << "no run logs found in " << dir << '\n';
    return kRuntimeFailure;
  }
  return clean ? kOk : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Funnel MPC for relative-degree-two systems"};
  app.require_subcommand(1);

  RunOverrides run_opts;
  auto* run = app.add_subcommand("run", "Run the closed-loop experiment");
  run->add_option("--config", run_opts.config, "Experiment config (JSON)")->required();
  run->add_option("--output", run_opts.output, "Output directory");
  run->add_option("--scheme", run_opts.scheme, "two_funnel | one_funnel | both");
  run->add_option("--t-end", run_opts.t_end, "Experiment end time (s)");
  run->add_option("--horizon", run_opts.horizon, "Prediction horizon T (s)");
  run->add_option("--shift", run_opts.shift, "Time shift delta (s)");
  run->add_option("--bound", run_opts.bound, "Input bound M");

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check funnels, initial state and relative degree");
  validate->add_option("--config", validate_config, "Experiment config (JSON)")->required();

  std::string audit_dir;
  auto* audit = app.add_subcommand("audit", "Recursive-feasibility report for a finished run");
  audit->add_option("--run", audit_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidationFailure;
  }

  if (*run) return cmd_run(run_opts);
  if (*validate) return cmd_validate(validate_config);
  if (*audit) return cmd_audit(audit_dir);
  return kValidationFailure;
}
