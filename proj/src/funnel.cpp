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

#include "fmpc/funnel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace fmpc {

BoundaryFunction BoundaryFunction::exponential(double a, double b, double c)
{
  BoundaryFunction f;
  f.kind_ = Kind::kExponential;
  f.a_ = a;
  f.b_ = b;
  f.c_ = c;
  return f;
}

BoundaryFunction BoundaryFunction::constant(double c)
{
  BoundaryFunction f;
  f.kind_ = Kind::kConstant;
  f.c_ = c;
  return f;
}

BoundaryFunction BoundaryFunction::custom(std::function<double(double)> value,
                                          std::function<double(double)> derivative)
{
  if (!value || !derivative) {
    throw std::invalid_argument("custom boundary needs both value and derivative");
  }
  BoundaryFunction f;
  f.kind_ = Kind::kCustom;
  f.value_ = std::move(value);
  f.derivative_ = std::move(derivative);
  return f;
}

double BoundaryFunction::value(double t) const
{
  switch (kind_) {
    case Kind::kExponential:
      return a_ * std::exp(-b_ * t) + c_;
    case Kind::kConstant:
      return c_;
    case Kind::kCustom:
      return value_(t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double BoundaryFunction::derivative(double t) const
{
  switch (kind_) {
    case Kind::kExponential:
      return -a_ * b_ * std::exp(-b_ * t);
    case Kind::kConstant:
      return 0.0;
    case Kind::kCustom:
      return derivative_(t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

BoundarySample eval_boundary(const BoundaryFunction& b, double t)
{
  if (!(t >= 0.0)) {
    throw std::domain_error("funnel boundary evaluated at negative time");
  }
  return {b.value(t), b.derivative(t)};
}

std::vector<double> uniform_grid(double begin, double end, double step)
{
  if (!(step > 0.0) || !(end >= begin)) {
    throw std::invalid_argument("uniform_grid: need step > 0 and end >= begin");
  }
  const auto intervals = static_cast<std::size_t>(std::ceil((end - begin) / step - 1e-9));
  std::vector<double> grid;
  grid.reserve(intervals + 1);
  for (std::size_t i = 0; i < intervals; ++i) {
    grid.push_back(begin + static_cast<double>(i) * step);
  }
  grid.push_back(end);
  return grid;
}

namespace {

void check_grid(std::span<const double> grid)
{
  if (grid.empty()) {
    throw std::invalid_argument("time grid is empty");
  }
  if (!(grid.front() >= 0.0)) {
    throw std::invalid_argument("time grid starts before zero");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("time grid is not strictly increasing");
    }
  }
}

}  // namespace

G0Report validate_g0(const BoundaryFunction& b, std::span<const double> grid)
{
  check_grid(grid);
  G0Report report;
  report.inf_value = std::numeric_limits<double>::infinity();
  for (const double t : grid) {
    const double v = b.value(t);
    const double dv = b.derivative(t);
    if (!(v > 0.0) || !std::isfinite(v) || !std::isfinite(dv)) {
      report.ok = false;
      report.violation_time = t;
      return report;
    }
    report.inf_value = std::min(report.inf_value, v);
  }
  report.ok = true;
  return report;
}

G1Report validate_g1(FunnelPair& pair, std::span<const double> grid)
{
  G1Report report;
  for (int i = 0; i < 2; ++i) {
    const auto g0 = validate_g0(i == 0 ? pair.psi0 : pair.psi1, grid);
    if (!g0) {
      report.failed_boundary = i;
      report.violation_time = g0.violation_time;
      return report;
    }
  }

  report.epsilon = std::numeric_limits<double>::infinity();
  bool violated = false;
  for (const double t : grid) {
    const double slack = pair.psi1.value(t) + pair.psi0.derivative(t);
    if (!violated && !(slack > 0.0)) {
      violated = true;
      report.violation_time = t;
    }
    report.epsilon = std::min(report.epsilon, slack);
  }
  report.ok = !violated;
  if (report.ok) {
    pair.epsilon = report.epsilon;
  }
  return report;
}

FunnelMembership in_funnel(const FunnelPair& pair, double t, double e0, double e1)
{
  const auto r0 = eval_boundary(pair.psi0, t).radius;
  const auto r1 = eval_boundary(pair.psi1, t).radius;
  FunnelMembership m;
  m.margins = {r0 - std::abs(e0), r1 - std::abs(e1)};
  // Strict inequalities, no slack. NaN errors land outside.
  if (!(std::abs(e0) < r0)) {
    m.outside_index = 0;
  } else if (!(std::abs(e1) < r1)) {
    m.outside_index = 1;
  } else {
    m.inside = true;
  }
  return m;
}

}  // namespace fmpc
