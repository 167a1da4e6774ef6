// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/cli/run_config.h"

#include <filesystem>
#include <fstream>

namespace pwsep::cli {
namespace {

std::string PointerToDotted(std::string key) {
  if (!key.empty() && key[0] == '/') key.erase(0, 1);
  for (char& c : key)
    if (c == '/') c = '.';
  return key;
}

std::string DottedToPointer(std::string key) {
  for (char& c : key)
    if (c == '.') c = '/';
  return "/" + key;
}

bool SameKind(const nlohmann::json& a, const nlohmann::json& b) {
  if (a.is_number() && b.is_number()) return true;
  return a.type() == b.type();
}

}  // namespace

RunConfig PresetConfig(const std::string& preset, pipelines::ModelKind kind) {
  RunConfig cfg;
  if (preset == "full") {
    cfg.model = pipelines::ModelConfig::Full(kind);
  } else if (preset == "toy") {
    cfg.model = pipelines::ModelConfig::Toy(kind);
    cfg.train.lr = 1e-3;
    cfg.train.epochs = 40;
    cfg.train.lr_decay_start_epoch = 20;
    cfg.train.lr_patience = 3;
    cfg.train.max_steps = 2000;
  } else {
    throw ConfigError("unknown config preset '" + preset + "' (expected toy or full)");
  }
  return cfg;
}

nlohmann::json ToFlatJson(const RunConfig& cfg) {
  nlohmann::json nested = {{"model", pipelines::ToJson(cfg.model)}, {"train", train::ToJson(cfg.train)}};
  nlohmann::json flat = nlohmann::json::object();
  const nlohmann::json pointers = nested.flatten();
  for (const auto& [key, value] : pointers.items()) flat[PointerToDotted(key)] = value;
  return flat;
}

RunConfig ApplyFlat(const RunConfig& base, const nlohmann::json& flat) {
  if (!flat.is_object()) throw ConfigError("config must be an object of dotted keys");
  nlohmann::json current = ToFlatJson(base);
  for (const auto& [key, value] : flat.items()) {
    if (!current.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    if (key == "model.kind") continue;
    if (!SameKind(current[key], value)) throw ConfigError("config key '" + key + "' has the wrong type");
    current[key] = value;
  }
  nlohmann::json pointers = nlohmann::json::object();
  for (const auto& [key, value] : current.items()) pointers[DottedToPointer(key)] = value;
  const nlohmann::json nested = pointers.unflatten();
  RunConfig out;
  try {
    out.model = pipelines::ModelConfigFromJson(nested.at("model"));
    out.train = train::TrainConfigFromJson(nested.at("train"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return out;
}

nlohmann::json ParseOverride(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  return {{key, value}};
}

RunConfig ResolveRunConfig(pipelines::ModelKind kind, const std::string& config,
                           const std::vector<std::string>& overrides) {
  RunConfig cfg;
  if (config == "toy" || config == "full") {
    cfg = PresetConfig(config, kind);
  } else {
    std::ifstream in(config);
    if (!in) throw ConfigError("cannot open config file '" + config + "'");
    nlohmann::json file = nlohmann::json::parse(in, nullptr, false);
    if (file.is_discarded() || !file.is_object()) throw ConfigError("config file '" + config + "' is not a JSON object");
    const std::string preset = file.value("preset", std::string("full"));
    file.erase("preset");
    // Nested sections and dotted keys may be mixed.
    nlohmann::json flat = nlohmann::json::object();
    if (!file.empty()) {
      const nlohmann::json pointers = file.flatten();
      for (const auto& [key, value] : pointers.items()) flat[PointerToDotted(key)] = value;
    }
    cfg = ApplyFlat(PresetConfig(preset, kind), flat);
  }
  for (const auto& o : overrides) cfg = ApplyFlat(cfg, ParseOverride(o));
  return cfg;
}

}  // namespace pwsep::cli
