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

#ifndef FMPC_SIM_HPP_
#define FMPC_SIM_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmpc/plant.hpp"

namespace fmpc {

/// Piecewise-constant input: values[k] is held on [t_start + k step, t_start + (k+1) step).
struct ControlSequence
{
  double t_start = 0.0;
  double step = 0.0;
  std::vector<double> values;
  double bound = 0.0;

  std::size_t size() const { return values.size(); }
  double span() const { return static_cast<double>(values.size()) * step; }
  double t_end() const { return t_start + span(); }
  /// Start time of interval k (k == size() gives t_end()).
  double boundary(std::size_t k) const { return t_start + static_cast<double>(k) * step; }
  /// Right-continuous level; times at or past t_end() give the last level.
  double level_at(double t) const;

  /// Throws std::invalid_argument on step <= 0, no values, or |value| > bound.
  void validate() const;
};

/// Sampled response. inputs[i] is the level active at times[i] (right-continuous).
struct Trajectory
{
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> outputs;
  std::vector<double> output_rates;
  std::vector<double> inputs;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  /// Appends a sample, computing y and y' from the plant.
  void record(const PlantModel& pm, double t, const State& x, double u);
  /// Appends `other`, dropping this trajectory's final sample when it shares a time with other's first.
  void splice(const Trajectory& other);
};

class IntegrationError : public std::runtime_error
{
public:
  enum class Kind { kDivergence, kStiffness };

  IntegrationError(Kind kind, double last_time, const std::string& what)
      : std::runtime_error(what), kind_(kind), last_time_(last_time)
  {
  }

  Kind kind() const { return kind_; }
  /// Last time at which the state was finite.
  double last_time() const { return last_time_; }

private:
  Kind kind_;
  double last_time_;
};

/**
 * Classical RK4 with exactly `substeps` equal steps per control interval.
 *
 * Samples are recorded at every substep boundary. Throws IntegrationError on a
 * non-finite state.
 */
Trajectory integrate_fixed(const PlantModel& pm, const State& x0, const ControlSequence& u,
                           int substeps = 4);

struct AdaptiveOptions
{
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = 0.01;
  double min_step = 1e-12;
};

/**
 * Dormand-Prince 5(4) with step-size control, restarted at each control switch
 * so that no step straddles a discontinuity. Samples are recorded at every
 * accepted step and at every control boundary.
 */
Trajectory integrate_adaptive(const PlantModel& pm, const State& x0, const ControlSequence& u,
                              const AdaptiveOptions& opts = {});

}  // namespace fmpc

#endif  // FMPC_SIM_HPP_
