// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/train/trainer.h"

#include <cmath>
#include <fstream>
#include <numeric>

#include "pwsep/io/checkpoint.h"
#include "pwsep/metrics/loss.h"
#include "pwsep/train/optim.h"
#include "pwsep/util/rng.h"

namespace pwsep::train {
namespace {

struct StepOutput {
  double loss = 0.0;
  ad::GradMap<float> grads;
};

StepOutput RunExample(ad::ParamRegistry<float>& params, const pipelines::ModelConfig& cfg,
                      const ambi::PwdMatrix& pwd, const Example& ex, bool backward) {
  ad::Tape<float> tape;
  auto x = tape.Constant({ex.channels, ex.length}, ex.mixture);
  auto out = pipelines::Forward(tape, params, cfg, pwd, x, &ex.targets);
  auto loss = metrics::NegSiSdrPitLoss(out.estimates, ex.targets);
  StepOutput s;
  s.loss = loss.value()[0];
  if (backward) s.grads = tape.Backward(loss);
  return s;
}

}  // namespace

Example Example::FromMixture(const sim::MixtureExample& mx) {
  Example ex;
  ex.channels = static_cast<std::size_t>(mx.mixture.channels());
  ex.length = static_cast<std::size_t>(mx.mixture.length());
  ex.sources = mx.targets.size();
  ex.seed = mx.seed;
  ex.mixture.reserve(ex.channels * ex.length);
  for (std::size_t c = 0; c < ex.channels; ++c)
    for (std::size_t n = 0; n < ex.length; ++n) ex.mixture.push_back(static_cast<float>(mx.mixture.samples(c, n)));
  for (const auto& t : mx.targets)
    for (std::size_t c = 0; c < ex.channels; ++c)
      for (std::size_t n = 0; n < ex.length; ++n) ex.targets.push_back(static_cast<float>(t.samples(c, n)));
  return ex;
}

void TrainConfig::Validate() const {
  if (!(lr > 0.0) || epochs <= 0 || !(lr_decay_factor > 0.0) || lr_patience <= 0 ||
      lr_decay_start_epoch < 0 || !(clip_norm > 0.0) || batch_size <= 0 || max_steps < 0) {
    throw std::invalid_argument("train config: values must be positive");
  }
}

nlohmann::json ToJson(const TrainConfig& c) {
  return {{"lr", c.lr},
          {"epochs", c.epochs},
          {"lr_decay_factor", c.lr_decay_factor},
          {"lr_patience", c.lr_patience},
          {"lr_decay_start_epoch", c.lr_decay_start_epoch},
          {"clip_norm", c.clip_norm},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"max_steps", c.max_steps}};
}

TrainConfig TrainConfigFromJson(const nlohmann::json& j) {
  TrainConfig c;
  c.lr = j.value("lr", c.lr);
  c.epochs = j.value("epochs", c.epochs);
  c.lr_decay_factor = j.value("lr_decay_factor", c.lr_decay_factor);
  c.lr_patience = j.value("lr_patience", c.lr_patience);
  c.lr_decay_start_epoch = j.value("lr_decay_start_epoch", c.lr_decay_start_epoch);
  c.clip_norm = j.value("clip_norm", c.clip_norm);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.seed = j.value("seed", c.seed);
  c.max_steps = j.value("max_steps", c.max_steps);
  c.Validate();
  return c;
}

nlohmann::json HistoryRecord::ToJson() const {
  nlohmann::json j = {{"epoch", epoch}, {"step", step}, {"train_loss", train_loss}, {"lr", lr}};
  j["val_loss"] = val_loss ? nlohmann::json(*val_loss) : nlohmann::json(nullptr);
  return j;
}

double EvaluateLoss(ad::ParamRegistry<float>& params, const pipelines::ModelConfig& cfg,
                    const ambi::PwdMatrix& pwd, const std::vector<Example>& examples) {
  if (examples.empty()) throw std::invalid_argument("EvaluateLoss: no examples");
  double sum = 0.0;
  for (const auto& ex : examples) sum += RunExample(params, cfg, pwd, ex, false).loss;
  return sum / static_cast<double>(examples.size());
}

TrainResult Train(ad::ParamRegistry<float>& params, const pipelines::ModelConfig& cfg,
                  const ambi::PwdMatrix& pwd, const EpochData& train_data,
                  const std::vector<Example>& val_data, const TrainConfig& tcfg,
                  const std::function<void(const HistoryRecord&)>& on_record) {
  tcfg.Validate();
  Adam adam;
  PlateauScheduler sched(tcfg.lr, tcfg.lr_decay_factor, tcfg.lr_patience, tcfg.lr_decay_start_epoch);
  TrainResult result;
  std::ofstream history;
  if (!tcfg.history_path.empty()) {
    history.open(tcfg.history_path, std::ios::trunc);
    if (!history) throw std::runtime_error("cannot write history to " + tcfg.history_path);
  }
  auto emit = [&](const HistoryRecord& r) {
    if (history) history << r.ToJson().dump() << '\n' << std::flush;
    if (on_record) on_record(r);
  };

  bool has_best = false;
  long step = 0;
  for (int epoch = 1; epoch <= tcfg.epochs; ++epoch) {
    const double lr = sched.lr();
    const auto examples = train_data(epoch);
    if (examples.empty()) throw std::invalid_argument("Train: epoch " + std::to_string(epoch) + " has no data");
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);
    Rng(Rng::Derive(tcfg.seed, static_cast<std::uint64_t>(epoch))).Shuffle(order.begin(), order.end());

    double epoch_loss = 0.0;
    std::size_t epoch_batches = 0;
    std::optional<HistoryRecord> pending;
    const auto batch = static_cast<std::size_t>(tcfg.batch_size);
    bool out_of_steps = false;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      ad::GradMap<float> grads;
      double loss = 0.0;
      for (std::size_t b = start; b < end; ++b) {
        const Example& ex = examples[order[b]];
        auto s = RunExample(params, cfg, pwd, ex, true);
        if (!std::isfinite(s.loss)) {
          throw NonFiniteLoss("non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                              std::to_string(step + 1) + ", example seed " + std::to_string(ex.seed));
        }
        loss += s.loss;
        for (auto& [name, g] : s.grads) {
          auto [it, inserted] = grads.emplace(name, g);
          if (!inserted) {
            for (std::size_t i = 0; i < g.data.size(); ++i) it->second.data[i] += g.data[i];
          }
        }
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      loss *= inv;
      for (auto& [name, g] : grads)
        for (float& v : g.data) v = static_cast<float>(v * inv);
      if (!std::isfinite(ClipGlobalNorm(grads, tcfg.clip_norm))) {
        throw NonFiniteLoss("non-finite gradient at epoch " + std::to_string(epoch) + ", step " +
                            std::to_string(step + 1) + ", first example seed " +
                            std::to_string(examples[order[start]].seed));
      }
      adam.Step(params, grads, lr);
      ++step;
      epoch_loss += loss;
      ++epoch_batches;
      if (pending) {
        result.history.push_back(*pending);
        emit(*pending);
      }
      pending = HistoryRecord{epoch, step, loss, std::nullopt, lr};
      if (tcfg.max_steps > 0 && step >= tcfg.max_steps) {
        out_of_steps = true;
        break;
      }
    }
    const double val = val_data.empty() ? epoch_loss / static_cast<double>(epoch_batches)
                                        : EvaluateLoss(params, cfg, pwd, val_data);
    pending->val_loss = val;
    result.history.push_back(*pending);
    emit(*pending);
    if (!has_best || val < result.best_val_loss) {
      has_best = true;
      result.best_val_loss = val;
      result.best_epoch = epoch;
      result.best_params = params;
      if (!tcfg.checkpoint_path.empty()) {
        nlohmann::json meta = {{"model", pipelines::ToJson(cfg)},
                               {"train", ToJson(tcfg)},
                               {"epoch", epoch},
                               {"step", step},
                               {"val_loss", val}};
        io::SaveCheckpoint(tcfg.checkpoint_path, meta, params);
      }
    }
    sched.EndEpoch(epoch, val);
    if (out_of_steps) break;
  }
  result.steps = step;
  return result;
}

}  // namespace pwsep::train
