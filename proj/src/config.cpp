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

#include "fmpc/config.hpp"

#include <fstream>
#include <sstream>

namespace fmpc {

using nlohmann::json;

BoundaryFunction BoundarySpec::build() const
{
  if (kind == "exponential") return BoundaryFunction::exponential(a, b, c);
  if (kind == "constant") return BoundaryFunction::constant(c);
  throw std::invalid_argument("unknown funnel kind '" + kind + "'");
}

namespace {

std::string join(const std::vector<std::string>& errors)
{
  std::ostringstream out;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    out << (i ? "; " : "") << errors[i];
  }
  return out.str();
}

// Pulls typed fields out of a JSON document and records every problem.
class Reader
{
public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  const json* section(const json& doc, const char* name)
  {
    if (!doc.contains(name)) return nullptr;
    const json& s = doc.at(name);
    if (!s.is_object()) {
      errors_.push_back(std::string("section '") + name + "' must be an object");
      return nullptr;
    }
    return &s;
  }

  void number(const json* s, const char* path, const char* key, double& out)
  {
    if (!s || !s->contains(key)) return;
    const json& v = s->at(key);
    if (!v.is_number()) {
      errors_.push_back(std::string(path) + "." + key + " must be a number");
      return;
    }
    out = v.get<double>();
  }

  template <typename Int>
  void integer(const json* s, const char* path, const char* key, Int& out)
  {
    if (!s || !s->contains(key)) return;
    const json& v = s->at(key);
    if (!v.is_number_integer()) {
      errors_.push_back(std::string(path) + "." + key + " must be an integer");
      return;
    }
    out = v.get<Int>();
  }

  void boolean(const json* s, const char* path, const char* key, bool& out)
  {
    if (!s || !s->contains(key)) return;
    const json& v = s->at(key);
    if (!v.is_boolean()) {
      errors_.push_back(std::string(path) + "." + key + " must be a boolean");
      return;
    }
    out = v.get<bool>();
  }

  void string(const json* s, const char* path, const char* key, std::string& out)
  {
    if (!s || !s->contains(key)) return;
    const json& v = s->at(key);
    if (!v.is_string()) {
      errors_.push_back(std::string(path) + "." + key + " must be a string");
      return;
    }
    out = v.get<std::string>();
  }

  void boundary(const json* funnels, const char* key, BoundarySpec& out)
  {
    if (!funnels || !funnels->contains(key)) return;
    const json& v = funnels->at(key);
    const std::string path = std::string("funnels.") + key;
    if (!v.is_object()) {
      errors_.push_back(path + " must be an object");
      return;
    }
    string(&v, path.c_str(), "kind", out.kind);
    number(&v, path.c_str(), "a", out.a);
    number(&v, path.c_str(), "b", out.b);
    number(&v, path.c_str(), "c", out.c);
  }

private:
  std::vector<std::string>& errors_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error("invalid config: " + join(errors)), errors_(std::move(errors))
{
}

ExperimentConfig parse_config(const json& doc)
{
  std::vector<std::string> errors;
  ExperimentConfig cfg;
  if (!doc.is_object()) {
    throw ConfigError({"config must be a JSON object"});
  }
  Reader r(errors);

  const json* plant = r.section(doc, "plant");
  r.string(plant, "plant", "name", cfg.plant_name);
  r.number(plant, "plant", "m1", cfg.plant_params.m1);
  r.number(plant, "plant", "m2", cfg.plant_params.m2);
  r.number(plant, "plant", "k", cfg.plant_params.k);
  r.number(plant, "plant", "d", cfg.plant_params.d);
  r.number(plant, "plant", "theta", cfg.plant_params.theta);

  const json* funnels = r.section(doc, "funnels");
  r.boundary(funnels, "psi0", cfg.psi0);
  r.boundary(funnels, "psi1", cfg.psi1);

  const json* reference = r.section(doc, "reference");
  r.string(reference, "reference", "name", cfg.reference_name);
  r.number(reference, "reference", "level", cfg.reference_level);

  FmpcConfig& c = cfg.controller;
  const json* ctrl = r.section(doc, "controller");
  r.number(ctrl, "controller", "horizon", c.horizon);
  r.number(ctrl, "controller", "shift", c.shift);
  r.number(ctrl, "controller", "bound", c.bound);
  r.number(ctrl, "controller", "lambda_u", c.lambda_u);
  r.number(ctrl, "controller", "t0", c.t0);
  r.number(ctrl, "controller", "t_end", c.t_end);
  r.number(ctrl, "controller", "cap", c.cap);
  r.number(ctrl, "controller", "violation_weight", c.violation_weight);
  r.boolean(ctrl, "controller", "warm_start", c.warm_start);
  if (ctrl && ctrl->contains("x0")) {
    const json& x0 = ctrl->at("x0");
    bool ok = x0.is_array() && !x0.empty();
    for (const auto& v : x0) ok = ok && v.is_number();
    if (ok) {
      c.x0.resize(static_cast<Eigen::Index>(x0.size()));
      for (std::size_t i = 0; i < x0.size(); ++i) c.x0[static_cast<Eigen::Index>(i)] = x0[i].get<double>();
    } else {
      errors.emplace_back("controller.x0 must be a non-empty array of numbers");
    }
  }
  if (ctrl && ctrl->contains("schemes")) {
    const json& schemes = ctrl->at("schemes");
    if (!schemes.is_array()) {
      errors.emplace_back("controller.schemes must be an array");
    } else {
      cfg.schemes.clear();
      for (const auto& s : schemes) {
        const auto parsed = s.is_string() ? parse_scheme(s.get<std::string>()) : std::nullopt;
        if (parsed) {
          cfg.schemes.push_back(*parsed);
        } else {
          errors.push_back("unknown scheme " + s.dump());
        }
      }
    }
  }

  const json* solver = r.section(doc, "solver");
  SolverOptions& so = c.solver;
  r.integer(solver, "solver", "max_iterations", so.max_iterations);
  r.number(solver, "solver", "gradient_tolerance", so.gradient_tolerance);
  r.number(solver, "solver", "decrease_tolerance", so.decrease_tolerance);
  r.number(solver, "solver", "fd_relative_step", so.fd_relative_step);
  r.number(solver, "solver", "armijo", so.armijo);
  r.number(solver, "solver", "shrink", so.shrink);
  r.integer(solver, "solver", "max_backtracks", so.max_backtracks);
  r.integer(solver, "solver", "substeps", so.substeps);
  r.integer(solver, "solver", "random_starts", so.random_starts);
  r.integer(solver, "solver", "seed", so.seed);
  const json* integ = solver ? r.section(*solver, "integrator") : nullptr;
  r.number(integ, "solver.integrator", "rtol", c.integrator.rtol);
  r.number(integ, "solver.integrator", "atol", c.integrator.atol);
  r.number(integ, "solver.integrator", "max_step", c.integrator.max_step);

  const json* output = r.section(doc, "output");
  r.string(output, "output", "directory", cfg.output_dir);

  for (auto& e : validate(cfg)) errors.push_back(std::move(e));
  if (!errors.empty()) {
    throw ConfigError(std::move(errors));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError({"cannot open config file " + path.string()});
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError({std::string("parse error: ") + err.what()});
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg)
{
  const FmpcConfig& c = cfg.controller;
  const auto boundary = [](const BoundarySpec& b) {
    return json{{"kind", b.kind}, {"a", b.a}, {"b", b.b}, {"c", b.c}};
  };
  json schemes = json::array();
  for (const auto s : cfg.schemes) schemes.push_back(std::string(to_string(s)));
  json x0 = json::array();
  for (Eigen::Index i = 0; i < c.x0.size(); ++i) x0.push_back(c.x0[i]);

  return json{
      {"plant",
       {{"name", cfg.plant_name},
        {"m1", cfg.plant_params.m1},
        {"m2", cfg.plant_params.m2},
        {"k", cfg.plant_params.k},
        {"d", cfg.plant_params.d},
        {"theta", cfg.plant_params.theta}}},
      {"funnels", {{"psi0", boundary(cfg.psi0)}, {"psi1", boundary(cfg.psi1)}}},
      {"reference", {{"name", cfg.reference_name}, {"level", cfg.reference_level}}},
      {"controller",
       {{"horizon", c.horizon},
        {"shift", c.shift},
        {"bound", c.bound},
        {"lambda_u", c.lambda_u},
        {"t0", c.t0},
        {"x0", x0},
        {"t_end", c.t_end},
        {"cap", c.cap},
        {"violation_weight", c.violation_weight},
        {"warm_start", c.warm_start},
        {"schemes", schemes}}},
      {"solver",
       {{"max_iterations", c.solver.max_iterations},
        {"gradient_tolerance", c.solver.gradient_tolerance},
        {"decrease_tolerance", c.solver.decrease_tolerance},
        {"fd_relative_step", c.solver.fd_relative_step},
        {"armijo", c.solver.armijo},
        {"shrink", c.solver.shrink},
        {"max_backtracks", c.solver.max_backtracks},
        {"substeps", c.solver.substeps},
        {"random_starts", c.solver.random_starts},
        {"seed", c.solver.seed},
        {"integrator",
         {{"rtol", c.integrator.rtol},
          {"atol", c.integrator.atol},
          {"max_step", c.integrator.max_step}}}}},
      {"output", {{"directory", cfg.output_dir}}},
  };
}

std::vector<std::string> plant_names() { return {"mass_on_car"}; }
std::vector<std::string> reference_names() { return {"cosine", "constant"}; }

std::vector<std::string> validate(const ExperimentConfig& cfg)
{
  std::vector<std::string> errors;
  if (cfg.plant_name == "mass_on_car") {
    for (auto& e : cfg.plant_params.validate()) errors.push_back("plant: " + e);
    if (cfg.controller.x0.size() != 4) {
      errors.emplace_back("controller.x0 must have 4 entries for mass_on_car");
    }
  } else {
    errors.push_back("unknown plant '" + cfg.plant_name + "'");
  }
  if (cfg.reference_name != "cosine" && cfg.reference_name != "constant") {
    errors.push_back("unknown reference '" + cfg.reference_name + "'");
  }
  for (const auto* b : {&cfg.psi0, &cfg.psi1}) {
    const char* which = b == &cfg.psi0 ? "psi0" : "psi1";
    if (b->kind != "exponential" && b->kind != "constant") {
      errors.push_back(std::string("funnels.") + which + ": unknown kind '" + b->kind + "'");
    }
  }
  for (auto& e : cfg.controller.validate()) errors.push_back(std::move(e));
  return errors;
}

PlantModel build_plant(const ExperimentConfig& cfg)
{
  if (cfg.plant_name == "mass_on_car") return mass_on_car(cfg.plant_params);
  throw std::invalid_argument("unknown plant '" + cfg.plant_name + "'");
}

ReferenceSignal build_reference(const ExperimentConfig& cfg)
{
  if (cfg.reference_name == "cosine") return reference_cosine();
  if (cfg.reference_name == "constant") return reference_constant(cfg.reference_level);
  throw std::invalid_argument("unknown reference '" + cfg.reference_name + "'");
}

FunnelPair build_funnels(const ExperimentConfig& cfg)
{
  return FunnelPair{cfg.psi0.build(), cfg.psi1.build()};
}

}  // namespace fmpc
