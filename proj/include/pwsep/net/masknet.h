// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_NET_MASKNET_H_
#define PWSEP_NET_MASKNET_H_

#include <cstddef>
#include <string>
#include <vector>

#include "pwsep/ad/ops.h"
#include "pwsep/util/rng.h"

namespace pwsep::net {

enum class BlockAxis { kInterChannel, kIntraChunk, kInterChunk };
enum class BlockOrder { kInterChannelFirst, kInterChannelLast };

std::string BlockAxisName(BlockAxis axis);
std::string BlockOrderName(BlockOrder order);
BlockOrder ParseBlockOrder(const std::string& s);

struct MasknetConfig {
  std::size_t features = 256;  // F
  std::size_t chunk = 250;     // C, even
  std::size_t repeats = 8;     // R
  std::size_t layers = 1;      // N_L per block
  std::size_t ff_dim = 1024;   // N_FF
  std::size_t heads = 8;
  std::size_t sources = 2;     // J
  std::size_t channels = 4;    // Q
  // Without inter-channel blocks every channel is processed independently
  // (the single-channel dual-path network used by the baselines).
  bool interchannel = true;
  BlockOrder order = BlockOrder::kInterChannelFirst;

  void Validate() const;
  std::vector<BlockAxis> Axes() const;
};

std::size_t MasknetParamCount(const MasknetConfig& cfg);

// Parameters under "masknet.": in_norm, in_linear, repeat{r}.{axis}.layer{k},
// prelu, out_linear, gate_tanh, gate_sigmoid, final_linear.
template <typename T>
void InitMasknet(ad::ParamRegistry<T>& reg, const MasknetConfig& cfg, Rng& rng);

// e: [Q, F, T] -> nonnegative masks [J, Q, F, T].
template <typename T>
ad::Var<T> MasknetForward(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg, const MasknetConfig& cfg,
                          ad::Var<T> e);

// One transformer block on a chunked tensor x: [Q, N_C, C, F]; data is
// regrouped so attention runs across channels, within chunks or across chunks.
template <typename T>
ad::Var<T> TransformerBlock(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg,
                            const std::string& prefix, ad::Var<T> x, BlockAxis axis,
                            std::size_t layers, std::size_t heads);

template <typename T>
void InitTransformerBlock(ad::ParamRegistry<T>& reg, const std::string& prefix,
                          std::size_t layers, std::size_t d, std::size_t d_ff, Rng& rng);

// Post transformer across the J*Q masked channels: x [J, Q, N] is cut into
// N_P = ceil(N / F) blocks of F samples (tail zero-padded), attended with
// batch N_P, sequence J*Q, feature F, and reassembled to [J, Q, N].
inline constexpr const char* kPostPrefix = "post.layer0";

template <typename T>
void InitPostTransformer(ad::ParamRegistry<T>& reg, std::size_t f, std::size_t d_ff, Rng& rng);

template <typename T>
ad::Var<T> PostTransformer(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg, ad::Var<T> x,
                           std::size_t f, std::size_t heads);

}  // namespace pwsep::net

#endif  // PWSEP_NET_MASKNET_H_
