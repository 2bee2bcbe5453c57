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

#ifndef FMPC_PLANT_HPP_
#define FMPC_PLANT_HPP_

/**
 * @file
 * @brief Control-affine single-input single-output plants
 *
 *   x' = f(x) + g(x) u,   y = h(x)
 *
 * plus reference signals and a numerical relative-degree check.
 */

#include <Eigen/Core>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fmpc {

using State = Eigen::VectorXd;

struct PlantModel
{
  std::string name;
  int n = 0;
  std::function<State(const State&)> f;
  std::function<State(const State&)> g;
  std::function<double(const State&)> h;
  /// Gradient of h, one entry per state coordinate.
  std::function<Eigen::RowVectorXd(const State&)> h_grad;

  /// f(x) + g(x) u
  State rate(const State& x, double u) const { return f(x) + g(x) * u; }
};

/**
 * Mass-spring-damper on a car.
 *
 * A car of mass m1 carries a ramp inclined by theta on which a mass m2 is
 * attached through a spring (k) and damper (d). The force u acts on the car.
 */
struct MassOnCarParams
{
  double m1 = 4.0;
  double m2 = 1.0;
  double k = 2.0;
  double d = 1.0;
  double theta = 0.78539816339744831;  // pi / 4

  /// Empty when all invariants hold.
  std::vector<std::string> validate() const;
};

/**
 * Builds the mass-on-car plant with state x = (z, s, z', s'), where z is the
 * car position and s the displacement of the mass along the ramp. Output is
 * the horizontal position of the mass, y = z + s cos(theta).
 *
 * Throws std::invalid_argument if the parameters violate their invariants.
 */
PlantModel mass_on_car(const MassOnCarParams& p);

struct OutputSample
{
  double y;
  double y_dot;
};

/// y = h(x), y' = h'(x) (f(x) + g(x) u).
OutputSample output_and_derivative(const PlantModel& pm, const State& x, double u);

/// (L_g h)(x) = h'(x) g(x)
double lie_g_h(const PlantModel& pm, const State& x);

/// (L_g L_f h)(x), the directional derivative of x -> h'(x) f(x) along g(x).
/// Fourth-order central differences with step `step`.
double lie_g_lie_f_h(const PlantModel& pm, const State& x, double step = 1e-3);

struct RelativeDegreeReport
{
  bool confirmed = false;
  double gain_min = 0.0;
  double gain_max = 0.0;
  State failed_state;
  std::string which;  // failure description

  explicit operator bool() const { return confirmed; }
};

/**
 * Confirms relative degree two at every sample: |L_g h| <= tol and
 * |L_g L_f h| >= max(tol_lower, tol). The gain threshold never drops below
 * `tol` so that a loose zero test cannot also pass the nonzero test.
 */
RelativeDegreeReport lie_relative_degree_check(const PlantModel& pm,
                                               std::span<const State> samples,
                                               double tol = 1e-9,
                                               double tol_lower = 1e-6);

struct ReferenceSignal
{
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> rate;
  std::function<double(double)> accel;
};

/// t -> cos(t)
ReferenceSignal reference_cosine();
ReferenceSignal reference_constant(double level);

}  // namespace fmpc

#endif  // FMPC_PLANT_HPP_
