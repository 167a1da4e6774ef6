// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_PIPELINES_MODEL_H_
#define PWSEP_PIPELINES_MODEL_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "pwsep/ambi/pwd.h"
#include "pwsep/net/codec.h"
#include "pwsep/net/masknet.h"

namespace pwsep::pipelines {

enum class ModelKind {
  kAmbiSep,  // triple-path masks on the PWD channels
  kOmniSf,   // dual-path masks from the omni channel, applied to every channel
  kPwdSf,    // dual-path masks per PWD channel plus a post transformer
  kOracle,   // Wiener masks from the true source images
};

std::string ModelKindName(ModelKind kind);
ModelKind ParseModelKind(const std::string& s);

struct ModelConfig {
  ModelKind kind = ModelKind::kAmbiSep;
  int order = 1;
  double sample_rate = 16000.0;
  net::CodecConfig codec;
  net::MasknetConfig masknet;

  // Full-size dimensions (F=256, W=32, H=16, C=250, N_FF=1024, 8 heads).
  static ModelConfig Full(ModelKind kind, std::size_t layers = 1, std::size_t repeats = 8);
  // Desk-scale dimensions at 8 kHz (F=64, W=16, H=8, C=50, R=2, N_FF=128, 4 heads).
  static ModelConfig Toy(ModelKind kind);

  int num_channels() const { return ambi::NumChannels(order); }
  // Derives the mask network's channel count and block layout from `kind`
  // and checks the rest.
  void Finalize();
};

nlohmann::json ToJson(const ModelConfig& cfg);
ModelConfig ModelConfigFromJson(const nlohmann::json& j);

std::size_t ModelParamCount(ModelConfig cfg);

template <typename T>
void InitModel(ad::ParamRegistry<T>& reg, ModelConfig cfg, Rng& rng);

template <typename T>
struct ModelOutput {
  ad::Var<T> estimates;  // [J, M, N]
  ad::Var<T> masks;      // [J, Q, F, T]; Q = 1 for Omni-SF
};

// x: [M, N] mixture. `targets` ([J, M, N] source images) is required for the
// oracle model and ignored otherwise.
template <typename T>
ModelOutput<T> Forward(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg, const ModelConfig& cfg,
                       const ambi::PwdMatrix& pwd, ad::Var<T> x,
                       const std::vector<T>* targets = nullptr);

// Wiener-style ratio masks from nonnegative TF magnitudes laid out [J, ...]:
// m_j = |c_j|^2 / sum_j' |c_j'|^2, and 1/J where the denominator is zero.
template <typename T>
std::vector<T> OracleWienerMasks(const std::vector<T>& tf, std::size_t sources);

// Inference wrapper on plain signals.
struct SeparationOutput {
  std::vector<ambi::AmbisonicSignal> estimates;
  ad::Tensor<float> masks;
};

SeparationOutput Separate(ad::ParamRegistry<float>& reg, const ModelConfig& cfg,
                          const ambi::PwdMatrix& pwd, const ambi::AmbisonicSignal& x,
                          const std::vector<ambi::AmbisonicSignal>* targets = nullptr);

}  // namespace pwsep::pipelines

#endif  // PWSEP_PIPELINES_MODEL_H_
