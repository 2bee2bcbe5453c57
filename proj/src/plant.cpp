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

#include "fmpc/plant.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fmpc {

std::vector<std::string> MassOnCarParams::validate() const
{
  std::vector<std::string> errors;
  if (!(m1 > 0.0)) errors.emplace_back("m1 must be positive");
  if (!(m2 > 0.0)) errors.emplace_back("m2 must be positive");
  if (!(k > 0.0)) errors.emplace_back("k must be positive");
  if (!(d > 0.0)) errors.emplace_back("d must be positive");
  if (!(theta >= 0.0 && theta < std::numbers::pi / 2)) {
    errors.emplace_back("theta must lie in [0, pi/2)");
  }
  return errors;
}

PlantModel mass_on_car(const MassOnCarParams& p)
{
  if (const auto errors = p.validate(); !errors.empty()) {
    throw std::invalid_argument("mass_on_car: " + errors.front());
  }
  const double c = std::cos(p.theta);
  Eigen::Matrix2d mass;
  mass << p.m1 + p.m2, p.m2 * c,
          p.m2 * c,    p.m2;
  // det = m2 (m1 + m2 sin^2 theta)
  if (!(mass.determinant() > 0.0)) {
    throw std::invalid_argument("mass_on_car: singular mass matrix");
  }
  const Eigen::Matrix2d inv = mass.inverse();
  const Eigen::Vector2d input_col = inv.col(0);
  const Eigen::Vector2d spring_col = inv.col(1);
  const double k = p.k;
  const double d = p.d;

  PlantModel pm;
  pm.name = "mass_on_car";
  pm.n = 4;
  pm.f = [spring_col, k, d](const State& x) {
    State dx(4);
    const double spring_force = -(k * x[1] + d * x[3]);
    dx << x[2], x[3], spring_col * spring_force;
    return dx;
  };
  pm.g = [input_col](const State&) {
    State gx(4);
    gx << 0.0, 0.0, input_col;
    return gx;
  };
  pm.h = [c](const State& x) { return x[0] + x[1] * c; };
  pm.h_grad = [c](const State&) {
    Eigen::RowVectorXd grad(4);
    grad << 1.0, c, 0.0, 0.0;
    return grad;
  };
  return pm;
}

OutputSample output_and_derivative(const PlantModel& pm, const State& x, double u)
{
  return {pm.h(x), pm.h_grad(x).dot(pm.rate(x, u))};
}

double lie_g_h(const PlantModel& pm, const State& x)
{
  return pm.h_grad(x).dot(pm.g(x));
}

double lie_g_lie_f_h(const PlantModel& pm, const State& x, double step)
{
  const State direction = pm.g(x);
  const auto lie_f_h = [&pm](const State& z) { return pm.h_grad(z).dot(pm.f(z)); };
  const double fp1 = lie_f_h(x + step * direction);
  const double fm1 = lie_f_h(x - step * direction);
  const double fp2 = lie_f_h(x + 2.0 * step * direction);
  const double fm2 = lie_f_h(x - 2.0 * step * direction);
  return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * step);
}

RelativeDegreeReport lie_relative_degree_check(const PlantModel& pm,
                                               std::span<const State> samples,
                                               double tol,
                                               double tol_lower)
{
  if (samples.empty()) {
    throw std::invalid_argument("lie_relative_degree_check: no sample states");
  }
  const double gain_floor = std::max(tol_lower, tol);
  RelativeDegreeReport report;
  report.gain_min = std::numeric_limits<double>::infinity();
  report.gain_max = -std::numeric_limits<double>::infinity();
  for (const State& x : samples) {
    if (!(std::abs(lie_g_h(pm, x)) <= tol)) {
      report.failed_state = x;
      report.which = "L_g h != 0";
      return report;
    }
    const double gain = lie_g_lie_f_h(pm, x);
    if (!(std::abs(gain) >= gain_floor)) {
      report.failed_state = x;
      report.which = "L_g L_f h vanishes";
      return report;
    }
    report.gain_min = std::min(report.gain_min, gain);
    report.gain_max = std::max(report.gain_max, gain);
  }
  report.confirmed = true;
  return report;
}

ReferenceSignal reference_cosine()
{
  return {"cosine",
          [](double t) { return std::cos(t); },
          [](double t) { return -std::sin(t); },
          [](double t) { return -std::cos(t); }};
}

ReferenceSignal reference_constant(double level)
{
  return {"constant",
          [level](double) { return level; },
          [](double) { return 0.0; },
          [](double) { return 0.0; }};
}

}  // namespace fmpc
