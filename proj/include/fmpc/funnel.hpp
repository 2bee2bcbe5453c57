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

#ifndef FMPC_FUNNEL_HPP_
#define FMPC_FUNNEL_HPP_

/**
 * @file
 * @brief Performance funnel boundaries and membership tests.
 *
 * A funnel is the open tube {(t, e) : |e| < psi(t)}. Tracking of a
 * relative-degree-two output uses a pair (psi0, psi1): psi0 bounds the
 * tracking error, psi1 bounds its derivative.
 */

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace fmpc {

/// Time-varying funnel radius together with its time derivative.
class BoundaryFunction
{
public:
  enum class Kind { kExponential, kConstant, kCustom };

  /// Constant zero radius; fails validate_g0 until replaced.
  BoundaryFunction() = default;

  /// t -> a * exp(-b t) + c
  static BoundaryFunction exponential(double a, double b, double c);
  static BoundaryFunction constant(double c);
  /// Black-box boundary. The caller is responsible for `derivative` matching `value`.
  static BoundaryFunction custom(std::function<double(double)> value,
                                 std::function<double(double)> derivative);

  double value(double t) const;
  double derivative(double t) const;

  Kind kind() const { return kind_; }
  /// Closed-form coefficients (a, b, c). Meaningless for Kind::kCustom.
  std::array<double, 3> coefficients() const { return {a_, b_, c_}; }

private:
  Kind kind_ = Kind::kConstant;
  double a_ = 0.0;
  double b_ = 0.0;
  double c_ = 0.0;
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
};

struct BoundarySample
{
  double radius;
  double rate;
};

/// Evaluates radius and radius derivative. Throws std::domain_error for t < 0.
BoundarySample eval_boundary(const BoundaryFunction& b, double t);

struct FunnelPair
{
  BoundaryFunction psi0;
  BoundaryFunction psi1;
  /// Coupling margin, filled in by validate_g1.
  double epsilon = 0.0;
};

/// Samples [begin, end] with spacing `step`; the last point is exactly `end`.
std::vector<double> uniform_grid(double begin, double end, double step);

struct G0Report
{
  bool ok = false;
  double inf_value = 0.0;       // sampled infimum (valid when ok)
  double violation_time = 0.0;  // first offending grid point (valid when !ok)

  explicit operator bool() const { return ok; }
};

/**
 * Checks that the boundary is uniformly bounded away from zero on the grid.
 *
 * A sample also counts as a violation if value or derivative is not finite.
 * Throws std::invalid_argument if the grid is empty, not strictly increasing,
 * or starts before zero.
 */
G0Report validate_g0(const BoundaryFunction& b, std::span<const double> grid);

struct G1Report
{
  bool ok = false;
  double epsilon = 0.0;          // min over grid of psi1 + d/dt psi0
  double violation_time = 0.0;
  int failed_boundary = -1;      // 0 or 1 when a G0 check failed, -1 otherwise

  explicit operator bool() const { return ok; }
};

/**
 * Checks the derivative-funnel coupling psi1(t) >= epsilon - d/dt psi0(t) for
 * some epsilon > 0. On success the best sampled epsilon is stored in
 * `pair.epsilon`.
 */
G1Report validate_g1(FunnelPair& pair, std::span<const double> grid);

struct FunnelMembership
{
  bool inside = false;
  std::array<double, 2> margins{};  // psi_i(t) - |e_i|
  int outside_index = -1;           // first funnel that failed, 0 checked first

  explicit operator bool() const { return inside; }
};

FunnelMembership in_funnel(const FunnelPair& pair, double t, double e0, double e1);

}  // namespace fmpc

#endif  // FMPC_FUNNEL_HPP_
