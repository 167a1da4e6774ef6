// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_CLI_RUN_CONFIG_H_
#define PWSEP_CLI_RUN_CONFIG_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwsep/pipelines/model.h"
#include "pwsep/train/trainer.h"

namespace pwsep::cli {

// Bad keys, values or preset names; the CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  pipelines::ModelConfig model;
  train::TrainConfig train;
};

// "toy" (8 kHz desk-scale model and its training schedule) or "full"
// (full-size model, default schedule).
RunConfig PresetConfig(const std::string& preset, pipelines::ModelKind kind);

// Flat view with dotted keys, e.g. "model.codec.filters", "train.lr".
nlohmann::json ToFlatJson(const RunConfig& cfg);

// Applies flat dotted keys on top of `base`. Unknown keys and type changes
// raise ConfigError. The model kind is never taken from `flat`.
RunConfig ApplyFlat(const RunConfig& base, const nlohmann::json& flat);

// Parses "key=value"; the value is read as JSON, or taken as a string if
// that fails.
nlohmann::json ParseOverride(const std::string& assignment);

// `config` is a preset name or a path to a JSON object of dotted keys or
// nested sections; a "preset" key in the file selects the base (default
// "full"). Overrides apply last.
RunConfig ResolveRunConfig(pipelines::ModelKind kind, const std::string& config,
                           const std::vector<std::string>& overrides);

}  // namespace pwsep::cli

#endif  // PWSEP_CLI_RUN_CONFIG_H_
