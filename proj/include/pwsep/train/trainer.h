// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_TRAIN_TRAINER_H_
#define PWSEP_TRAIN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwsep/pipelines/model.h"
#include "pwsep/sim/mixture.h"

namespace pwsep::train {

// One training or validation mixture in float, row-major.
struct Example {
  std::size_t channels = 0;
  std::size_t length = 0;
  std::size_t sources = 0;
  std::vector<float> mixture;  // [M, N]
  std::vector<float> targets;  // [J, M, N]
  std::uint64_t seed = 0;      // identifies the example in diagnostics

  static Example FromMixture(const sim::MixtureExample& ex);
};

struct TrainConfig {
  double lr = 1.5e-4;
  int epochs = 170;
  double lr_decay_factor = 0.5;
  int lr_patience = 3;
  int lr_decay_start_epoch = 65;
  double clip_norm = 5.0;
  int batch_size = 1;
  std::uint64_t seed = 0;
  long max_steps = 0;  // 0: no limit
  std::string checkpoint_path;  // best-validation checkpoint, if set
  std::string history_path;     // JSONL history, if set

  void Validate() const;
};

nlohmann::json ToJson(const TrainConfig& cfg);
// Inverse of ToJson; missing keys keep their defaults. Paths are not stored.
TrainConfig TrainConfigFromJson(const nlohmann::json& j);

struct HistoryRecord {
  int epoch = 0;
  long step = 0;
  double train_loss = 0.0;
  std::optional<double> val_loss;  // set on the last step of each epoch
  double lr = 0.0;

  nlohmann::json ToJson() const;
  bool operator==(const HistoryRecord&) const = default;
};

struct TrainResult {
  std::vector<HistoryRecord> history;
  double best_val_loss = 0.0;
  int best_epoch = 0;
  long steps = 0;
  ad::ParamRegistry<float> best_params;
};

// Thrown when a loss or gradient turns non-finite.
class NonFiniteLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training examples for a given (1-based) epoch; lets callers remix sources
// and RIRs every epoch.
using EpochData = std::function<std::vector<Example>(int epoch)>;

// Mean loss (negative SI-SDR under PIT) over examples, forward only.
double EvaluateLoss(ad::ParamRegistry<float>& params, const pipelines::ModelConfig& cfg,
                    const ambi::PwdMatrix& pwd, const std::vector<Example>& examples);

// Adam on -SI-SDR with uPIT, global-norm clipping, plateau LR halving and
// best-validation checkpointing. `params` holds the final weights on return.
TrainResult Train(ad::ParamRegistry<float>& params, const pipelines::ModelConfig& cfg,
                  const ambi::PwdMatrix& pwd, const EpochData& train_data,
                  const std::vector<Example>& val_data, const TrainConfig& tcfg,
                  const std::function<void(const HistoryRecord&)>& on_record = {});

}  // namespace pwsep::train

#endif  // PWSEP_TRAIN_TRAINER_H_
