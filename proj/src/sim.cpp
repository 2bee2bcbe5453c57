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

#include "fmpc/sim.hpp"

#include <algorithm>
#include <cmath>

namespace fmpc {

double ControlSequence::level_at(double t) const
{
  if (values.empty()) {
    throw std::logic_error("level_at on empty control sequence");
  }
  if (t <= t_start) {
    return values.front();
  }
  const auto k = static_cast<std::size_t>(std::floor((t - t_start) / step));
  // floor() can land one interval early when t sits on a boundary.
  std::size_t idx = std::min(k, values.size() - 1);
  if (idx + 1 < values.size() && t >= boundary(idx + 1)) {
    ++idx;
  }
  return values[idx];
}

void ControlSequence::validate() const
{
  if (!(step > 0.0)) {
    throw std::invalid_argument("control step must be positive");
  }
  if (values.empty()) {
    throw std::invalid_argument("control sequence has no intervals");
  }
  for (const double v : values) {
    if (!(std::abs(v) <= bound)) {
      throw std::invalid_argument("control level exceeds bound");
    }
  }
}

void Trajectory::record(const PlantModel& pm, double t, const State& x, double u)
{
  const auto out = output_and_derivative(pm, x, u);
  times.push_back(t);
  states.push_back(x);
  outputs.push_back(out.y);
  output_rates.push_back(out.y_dot);
  inputs.push_back(u);
}

void Trajectory::splice(const Trajectory& other)
{
  if (other.empty()) {
    return;
  }
  if (!empty() && times.back() >= other.times.front()) {
    times.pop_back();
    states.pop_back();
    outputs.pop_back();
    output_rates.pop_back();
    inputs.pop_back();
  }
  times.insert(times.end(), other.times.begin(), other.times.end());
  states.insert(states.end(), other.states.begin(), other.states.end());
  outputs.insert(outputs.end(), other.outputs.begin(), other.outputs.end());
  output_rates.insert(output_rates.end(), other.output_rates.begin(), other.output_rates.end());
  inputs.insert(inputs.end(), other.inputs.begin(), other.inputs.end());
}

namespace {

bool all_finite(const State& x) { return x.allFinite(); }

void check_state(const State& x, double t_prev, double t)
{
  if (!all_finite(x)) {
    throw IntegrationError(IntegrationError::Kind::kDivergence, t_prev,
                           "non-finite state at t=" + std::to_string(t));
  }
}

}  // namespace

Trajectory integrate_fixed(const PlantModel& pm, const State& x0, const ControlSequence& u,
                           int substeps)
{
  if (substeps < 1) {
    throw std::invalid_argument("integrate_fixed: substeps must be >= 1");
  }
  u.validate();
  Trajectory traj;
  const std::size_t samples = u.size() * static_cast<std::size_t>(substeps) + 1;
  traj.times.reserve(samples);
  traj.states.reserve(samples);
  traj.outputs.reserve(samples);
  traj.output_rates.reserve(samples);
  traj.inputs.reserve(samples);

  State x = x0;
  check_state(x, u.t_start, u.t_start);
  traj.record(pm, u.t_start, x, u.values.front());

  const double h = u.step / substeps;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double level = u.values[k];
    const double t_k = u.boundary(k);
    const auto rhs = [&pm, level](const State& z) { return pm.rate(z, level); };
    for (int j = 0; j < substeps; ++j) {
      const State k1 = rhs(x);
      const State k2 = rhs(x + 0.5 * h * k1);
      const State k3 = rhs(x + 0.5 * h * k2);
      const State k4 = rhs(x + h * k3);
      const double t_prev = j == 0 ? t_k : t_k + j * h;
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double t = j + 1 == substeps ? u.boundary(k + 1) : t_k + (j + 1) * h;
      check_state(x, t_prev, t);
      const double active = j + 1 == substeps && k + 1 < u.size() ? u.values[k + 1] : level;
      traj.record(pm, t, x, active);
    }
  }
  return traj;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b_hat
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

}  // namespace

Trajectory integrate_adaptive(const PlantModel& pm, const State& x0, const ControlSequence& u,
                              const AdaptiveOptions& opts)
{
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0) || !(opts.max_step > 0.0)) {
    throw std::invalid_argument("integrate_adaptive: tolerances and max_step must be positive");
  }
  u.validate();
  Trajectory traj;
  State x = x0;
  check_state(x, u.t_start, u.t_start);
  traj.record(pm, u.t_start, x, u.values.front());

  double h = std::min(opts.max_step, u.step);
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double level = u.values[k];
    const double t_end = u.boundary(k + 1);
    const auto rhs = [&pm, level](const State& z) { return pm.rate(z, level); };
    double t = u.boundary(k);
    State k1 = rhs(x);  // FSAL is reset at every control switch
    while (t < t_end) {
      h = std::min(h, opts.max_step);
      bool last = false;
      if (t + h * (1.0 + 1e-10) >= t_end) {
        h = t_end - t;
        last = true;
      }
      if (h < opts.min_step) {
        throw IntegrationError(IntegrationError::Kind::kStiffness, t,
                               "step size underflow at t=" + std::to_string(t));
      }
      const State k2 = rhs(x + h * (a21 * k1));
      const State k3 = rhs(x + h * (a31 * k1 + a32 * k2));
      const State k4 = rhs(x + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const State k5 = rhs(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const State k6 = rhs(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const State x_new = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const State k7 = rhs(x_new);
      const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double norm = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double scale =
            opts.atol + opts.rtol * std::max(std::abs(x[i]), std::abs(x_new[i]));
        norm += (err[i] / scale) * (err[i] / scale);
      }
      norm = std::sqrt(norm / static_cast<double>(x.size()));

      if (!std::isfinite(norm)) {
        h *= 0.2;
        if (h < opts.min_step) {
          throw IntegrationError(IntegrationError::Kind::kDivergence, t,
                                 "non-finite state after t=" + std::to_string(t));
        }
        continue;
      }
      if (norm <= 1.0) {
        const double t_next = last ? t_end : t + h;
        check_state(x_new, t, t_next);
        x = x_new;
        k1 = k7;
        t = t_next;
        const double active = last && k + 1 < u.size() ? u.values[k + 1] : level;
        traj.record(pm, t, x, active);
        const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        if (!last) {
          h *= factor;
        } else {
          h = std::max(h * factor, std::min(opts.max_step, u.step) * 1e-3);
        }
      } else {
        h *= std::max(0.2, 0.9 * std::pow(norm, -0.25));
      }
    }
  }
  return traj;
}

}  // namespace fmpc
