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

#ifndef FMPC_CONFIG_HPP_
#define FMPC_CONFIG_HPP_

/**
 * @file
 * @brief Experiment configuration: a single JSON document with the sections
 * plant, funnels, reference, controller, solver and output.
 */

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmpc/cost.hpp"
#include "fmpc/funnel.hpp"
#include "fmpc/mpc.hpp"
#include "fmpc/plant.hpp"

namespace fmpc {

/// Closed-form funnel boundary as declared in a config file.
struct BoundarySpec
{
  std::string kind = "exponential";  // "exponential" | "constant"
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  BoundaryFunction build() const;
};

struct ExperimentConfig
{
  std::string plant_name = "mass_on_car";
  MassOnCarParams plant_params;
  BoundarySpec psi0{"exponential", 3.0, 2.0, 0.1};
  BoundarySpec psi1{"exponential", 6.0, 1.0, 0.1};
  std::string reference_name = "cosine";
  double reference_level = 0.0;  // used by the "constant" reference
  FmpcConfig controller;         // controller.scheme is overwritten per run
  std::vector<CostScheme> schemes{CostScheme::kTwoFunnel, CostScheme::kOneFunnel};
  std::string output_dir = "fmpc_out";
};

/// Carries every validation problem found, not just the first.
class ConfigError : public std::runtime_error
{
public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

private:
  std::vector<std::string> errors_;
};

/// Parses and validates. Throws ConfigError listing all problems.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Semantic checks on an already-parsed config (names resolve, invariants hold).
std::vector<std::string> validate(const ExperimentConfig& cfg);

/// Registry lookups. Throw std::invalid_argument for unknown names.
PlantModel build_plant(const ExperimentConfig& cfg);
ReferenceSignal build_reference(const ExperimentConfig& cfg);
FunnelPair build_funnels(const ExperimentConfig& cfg);

std::vector<std::string> plant_names();
std::vector<std::string> reference_names();

}  // namespace fmpc

#endif  // FMPC_CONFIG_HPP_
