// Copyright 2026 The dtstat Authors.
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

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "dtstat/errors.h"
#include "dtstat/experiment.h"
#include "toml.hpp"

namespace dtstat {
namespace {

std::set<std::string> KeysOf(const nlohmann::json& j) {
  std::set<std::string> keys;
  for (const auto& item : j.items()) keys.insert(item.key());
  return keys;
}

// Known keys per section; the model and family lists come from the
// serializers so they cannot drift.
const std::map<std::string, std::set<std::string>>& Schema() {
  static const auto* schema = [] {
    auto* s = new std::map<std::string, std::set<std::string>>;
    (*s)["model"] = KeysOf(ParamsToJson(ModelParams{}));
    (*s)["family"] = KeysOf(FamilyConfigToJson(FamilyConfig{}));
    (*s)["family"].insert("seed");
    (*s)["estimator"] = {"method", "mode", "t", "seed", "memo", "budget"};
    (*s)["experiment"] = {"trials_p",    "trials_q", "calibration_trials",
                          "threshold_c", "master_seed", "threads"};
    return s;
  }();
  return *schema;
}

nlohmann::json ScalarToJson(const toml::node& node, const std::string& where) {
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  throw Error(ErrorKind::kParseError, where + " must be a scalar");
}

// Section tables as JSON objects, with unknown names rejected.
std::map<std::string, nlohmann::json> Sections(const toml::table& root) {
  std::map<std::string, nlohmann::json> out;
  for (const auto& [name, node] : root) {
    const std::string section(name.str());
    const auto known = Schema().find(section);
    if (known == Schema().end()) {
      throw Error(ErrorKind::kParseError, "unknown section [" + section + "]");
    }
    const auto* table = node.as_table();
    if (table == nullptr) {
      throw Error(ErrorKind::kParseError, section + " must be a table");
    }
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [key_name, value] : *table) {
      const std::string key(key_name.str());
      if (!known->second.count(key)) {
        throw Error(ErrorKind::kParseError,
                    "unknown key '" + key + "' in [" + section + "]");
      }
      obj[key] = ScalarToJson(value, section + "." + key);
    }
    out[section] = obj;
  }
  return out;
}

template <typename T>
T Get(const nlohmann::json& obj, const char* key, T fallback) {
  try {
    return obj.value(key, fallback);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string(key) + ": " + e.what());
  }
}

// Seeds may be written as any non-negative TOML integer.
uint64_t GetSeed(const nlohmann::json& obj, const char* key,
                 uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<int64_t>() < 0) {
    throw Error(ErrorKind::kParseError,
                std::string(key) + " must be a non-negative integer");
  }
  return v.get<uint64_t>();
}

}  // namespace

const char* MethodName(Method m) {
  return m == Method::kColor ? "color" : "exact";
}

Method ParseMethod(const std::string& name) {
  if (name == "color") return Method::kColor;
  if (name == "exact") return Method::kExact;
  throw Error(ErrorKind::kInvalidConfig, "unknown method '" + name + "'");
}

const char* HypothesisName(Hypothesis h) {
  return h == Hypothesis::kP ? "P" : "Q";
}

void ExperimentConfig::Validate() const {
  model.Validate();
  family.Validate();
  estimator.Validate();
  auto fail = [](const std::string& msg) {
    throw Error(ErrorKind::kInvalidConfig, msg);
  };
  if (trials_p < 1 || trials_q < 1) fail("trials_p and trials_q must be >= 1");
  if (!(threshold_c > 0.0 && threshold_c < 1.0)) {
    fail("threshold_c must lie strictly between 0 and 1");
  }
  if (threads < 1) fail("threads must be >= 1");
  if (budget == 0) fail("budget must be positive");
  if (method == Method::kColor && mode != PathMode::kNb) {
    fail("the colour-coding estimator only supports mode = \"nb\"");
  }
}

ExperimentConfig ParseConfig(const std::string& toml_text) {
  ExperimentConfig cfg = ParseConfigUnchecked(toml_text);
  cfg.Validate();
  return cfg;
}

ExperimentConfig ParseConfigUnchecked(const std::string& toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " at line " << e.source().begin.line;
    throw Error(ErrorKind::kParseError, msg.str());
  }
  auto sections = Sections(root);
  const nlohmann::json empty = nlohmann::json::object();
  auto section = [&](const char* name) -> const nlohmann::json& {
    auto it = sections.find(name);
    return it == sections.end() ? empty : it->second;
  };

  ExperimentConfig cfg;
  cfg.model = ParamsFromJson(section("model"));
  const auto& fam = section("family");
  cfg.family = FamilyConfigFromJson(fam);
  cfg.family_seed = GetSeed(fam, "seed", cfg.family_seed);

  const auto& est = section("estimator");
  cfg.method = ParseMethod(Get<std::string>(est, "method", "color"));
  cfg.mode = ParsePathMode(Get<std::string>(est, "mode", "nb"));
  cfg.estimator.t = Get<int>(est, "t", cfg.estimator.t);
  cfg.estimator.seed = GetSeed(est, "seed", cfg.estimator.seed);
  cfg.estimator.memo = Get<bool>(est, "memo", cfg.estimator.memo);
  cfg.budget = GetSeed(est, "budget", cfg.budget);

  const auto& exp = section("experiment");
  cfg.trials_p = Get<int>(exp, "trials_p", cfg.trials_p);
  cfg.trials_q = Get<int>(exp, "trials_q", cfg.trials_q);
  cfg.calibration_trials =
      Get<int>(exp, "calibration_trials", cfg.calibration_trials);
  cfg.threshold_c = Get<double>(exp, "threshold_c", cfg.threshold_c);
  cfg.master_seed = GetSeed(exp, "master_seed", cfg.master_seed);
  cfg.threads = Get<int>(exp, "threads", cfg.threads);
  return cfg;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidConfig, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

nlohmann::json ConfigToJson(const ExperimentConfig& cfg) {
  nlohmann::json family = FamilyConfigToJson(cfg.family);
  family["seed"] = cfg.family_seed;
  return {
      {"model", ParamsToJson(cfg.model)},
      {"family", family},
      {"estimator",
       {{"method", MethodName(cfg.method)},
        {"mode", PathModeName(cfg.mode)},
        {"t", cfg.estimator.t},
        {"seed", cfg.estimator.seed},
        {"memo", cfg.estimator.memo},
        {"budget", cfg.budget}}},
      {"experiment",
       {{"trials_p", cfg.trials_p},
        {"trials_q", cfg.trials_q},
        {"calibration_trials", cfg.CalibrationTrials()},
        {"threshold_c", cfg.threshold_c},
        {"master_seed", cfg.master_seed},
        {"threads", cfg.threads}}},
  };
}

}  // namespace dtstat
