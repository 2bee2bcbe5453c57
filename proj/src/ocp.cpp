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

#include "fmpc/ocp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace fmpc {

std::size_t OcpProblem::intervals() const
{
  if (!(control_step > 0.0) || !(horizon > 0.0)) {
    throw std::invalid_argument("horizon and control step must be positive");
  }
  const double ratio = horizon / control_step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("horizon not a multiple of control step");
  }
  return static_cast<std::size_t>(rounded);
}

void OcpProblem::validate() const
{
  intervals();
  if (!(bound > 0.0)) {
    throw std::invalid_argument("input bound must be positive");
  }
  if (x_hat.size() != plant.n) {
    throw std::invalid_argument("measured state has wrong dimension");
  }
}

namespace {

ControlSequence make_sequence(const OcpProblem& p, std::vector<double> levels)
{
  ControlSequence u;
  u.t_start = p.t_hat;
  u.step = p.control_step;
  u.values = std::move(levels);
  u.bound = p.bound;
  return u;
}

constexpr double kDiverged = std::numeric_limits<double>::infinity();

class ProjectedGradient
{
public:
  ProjectedGradient(const OcpProblem& p, const SolverOptions& opts) : p_(p), opts_(opts) {}

  double evaluate(std::span<const double> levels)
  {
    ++evaluations_;
    return ocp_objective(p_, levels, opts_.substeps).value;
  }

  struct Result
  {
    std::vector<double> levels;
    double cost;
    int iterations;
    bool converged;
    std::string termination;
  };

  Result minimize(std::vector<double> x, double cost)
  {
    const double bound = p_.bound;
    const std::size_t n = x.size();
    const double fd_step = opts_.fd_relative_step * std::max(1.0, bound);

    std::vector<double> grad(n), prev_x, prev_grad, trial(n), perturbed;
    double alpha = 0.0;
    int iter = 0;
    for (; iter < opts_.max_iterations; ++iter) {
      if (!std::isfinite(cost)) {
        return {std::move(x), cost, iter, false, "diverged start"};
      }

      // Forward differences, switching to backward ones at the upper bound.
      perturbed = x;
      for (std::size_t i = 0; i < n; ++i) {
        const bool forward = x[i] + fd_step <= bound;
        perturbed[i] = forward ? x[i] + fd_step : x[i] - fd_step;
        double shifted = evaluate(perturbed);
        double slope = forward ? (shifted - cost) / fd_step : (cost - shifted) / fd_step;
        if (!std::isfinite(shifted)) {
          perturbed[i] = forward ? x[i] - fd_step : x[i] + fd_step;
          shifted = evaluate(perturbed);
          slope = forward ? (cost - shifted) / fd_step : (shifted - cost) / fd_step;
          if (!std::isfinite(slope)) slope = 0.0;
        }
        grad[i] = slope;
        perturbed[i] = x[i];
      }

      double pg_norm = 0.0;
      double grad_max = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - std::clamp(x[i] - grad[i], -bound, bound);
        pg_norm += d * d;
        grad_max = std::max(grad_max, std::abs(grad[i]));
      }
      pg_norm = std::sqrt(pg_norm);
      if (pg_norm < opts_.gradient_tolerance) {
        return {std::move(x), cost, iter, true, "projected gradient"};
      }

      // Barzilai-Borwein trial step, then Armijo backtracking along the projection arc.
      if (prev_x.empty()) {
        alpha = 0.1 * bound / grad_max;
      } else {
        double ss = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double s = x[i] - prev_x[i];
          const double y = grad[i] - prev_grad[i];
          ss += s * s;
          sy += s * y;
        }
        alpha = sy > 0.0 ? ss / sy : 2.0 * alpha;
        alpha = std::clamp(alpha, 1e-10 * bound / grad_max, 10.0 * bound / grad_max);
      }

      bool accepted = false;
      double trial_cost = cost;
      for (int bt = 0; bt < opts_.max_backtracks; ++bt) {
        double directional = 0.0;
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
          trial[i] = std::clamp(x[i] - alpha * grad[i], -bound, bound);
          directional += grad[i] * (trial[i] - x[i]);
          moved = moved || trial[i] != x[i];
        }
        if (!moved) break;
        trial_cost = evaluate(trial);
        if (trial_cost <= cost + opts_.armijo * directional) {
          accepted = true;
          break;
        }
        alpha *= opts_.shrink;
      }
      if (!accepted) {
        return {std::move(x), cost, iter, false, "line search"};
      }

      prev_x = x;
      prev_grad = grad;
      const double decrease = cost - trial_cost;
      x = trial;
      cost = trial_cost;
      if (decrease < opts_.decrease_tolerance) {
        return {std::move(x), cost, iter + 1, true, "small decrease"};
      }
    }
    return {std::move(x), cost, iter, false, "iteration limit"};
  }

  int evaluations() const { return evaluations_; }

private:
  const OcpProblem& p_;
  const SolverOptions& opts_;
  int evaluations_ = 0;
};

}  // namespace

RunningCost ocp_objective(const OcpProblem& p, std::span<const double> levels, int substeps,
                          Trajectory* predicted)
{
  ControlSequence u = make_sequence(p, {levels.begin(), levels.end()});
  try {
    Trajectory traj = integrate_fixed(p.plant, p.x_hat, u, substeps);
    RunningCost cost = running_cost(p.cost, traj);
    if (predicted) *predicted = std::move(traj);
    return cost;
  } catch (const IntegrationError& err) {
    if (predicted) *predicted = Trajectory{};
    return {false, kDiverged, err.last_time()};
  }
}

OcpSolution solve_ocp(const OcpProblem& p, const std::optional<ControlSequence>& warm_start,
                      const SolverOptions& opts)
{
  p.validate();
  const std::size_t n = p.intervals();

  std::vector<std::vector<double>> starts;
  if (warm_start) {
    if (warm_start->size() != n || std::abs(warm_start->step - p.control_step) > 1e-12) {
      throw std::invalid_argument("warm start does not match the problem discretization");
    }
    std::vector<double> levels = warm_start->values;
    for (double& v : levels) v = std::clamp(v, -p.bound, p.bound);
    starts.push_back(std::move(levels));
  }
  starts.emplace_back(n, 0.0);
  if (opts.random_starts > 0) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> level(-p.bound, p.bound);
    for (int r = 0; r < opts.random_starts; ++r) {
      std::vector<double> levels(n);
      for (double& v : levels) v = level(rng);
      starts.push_back(std::move(levels));
    }
  }

  ProjectedGradient solver(p, opts);
  SolverStats stats;
  std::vector<double> best_levels;
  double best_cost = kDiverged;
  bool best_converged = false;
  std::string best_termination = "diverged";
  for (auto& start : starts) {
    const double start_cost = solver.evaluate(start);
    stats.start_costs.push_back(start_cost);
    auto result = solver.minimize(std::move(start), start_cost);
    stats.iterations += result.iterations;
    if (best_levels.empty() || result.cost < best_cost) {
      best_levels = std::move(result.levels);
      best_cost = result.cost;
      best_converged = result.converged;
      best_termination = result.termination;
    }
  }
  if (!std::isfinite(best_cost)) {
    throw std::runtime_error("solve_ocp: every prediction diverged");
  }

  OcpSolution sol;
  const RunningCost final_cost = ocp_objective(p, best_levels, opts.substeps, &sol.predicted);
  stats.evaluations = solver.evaluations() + 1;
  stats.converged = best_converged;
  stats.termination = best_termination;
  sol.controls = make_sequence(p, std::move(best_levels));
  sol.cost_value = final_cost.value;
  sol.feasible = final_cost.feasible;
  sol.stats = std::move(stats);
  return sol;
}

Admissibility admissible(const OcpProblem& p, const ControlSequence& u,
                         const AdaptiveOptions& integrator)
{
  Admissibility result;
  result.margins = {std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!(std::abs(u.values[k]) < p.bound)) {
      result.violation_time = u.boundary(k);
      result.which = "bound";
      return result;
    }
  }

  Trajectory traj;
  try {
    traj = integrate_adaptive(p.plant, p.x_hat, u, integrator);
  } catch (const IntegrationError& err) {
    result.violation_time = err.last_time();
    result.which = std::string("integrator: ") + err.what();
    return result;
  }

  const auto& ref = p.cost.reference;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    const auto m = in_funnel(p.cost.funnels, t, traj.outputs[i] - ref.value(t),
                             traj.output_rates[i] - ref.rate(t));
    result.margins[0] = std::min(result.margins[0], m.margins[0]);
    result.margins[1] = std::min(result.margins[1], m.margins[1]);
    if (!m.inside && result.which.empty()) {
      result.violation_time = t;
      result.which = m.outside_index == 0 ? "funnel0" : "funnel1";
    }
  }
  result.yes = result.which.empty();
  return result;
}

ControlSequence shift_warm_start(const ControlSequence& prev, std::size_t shift)
{
  if (shift >= prev.size()) {
    throw std::invalid_argument("shift_warm_start: shift must be smaller than the sequence length");
  }
  ControlSequence next = prev;
  next.t_start = prev.boundary(shift);
  next.values.erase(next.values.begin(), next.values.begin() + static_cast<std::ptrdiff_t>(shift));
  next.values.resize(prev.size(), prev.values.back());
  return next;
}

}  // namespace fmpc
