// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_NET_CODEC_H_
#define PWSEP_NET_CODEC_H_

#include <cstddef>

#include "pwsep/ad/ops.h"
#include "pwsep/util/rng.h"

namespace pwsep::net {

// Learned filterbank shared by all channels: F filters of W taps, stride H.
struct CodecConfig {
  std::size_t filters = 256;  // F
  std::size_t kernel = 32;    // W
  std::size_t stride = 16;    // H

  void Validate() const;
  std::size_t Frames(std::size_t samples) const;
};

// Encoder and decoder filterbanks, no bias: 2 F W.
std::size_t CodecParamCount(const CodecConfig& cfg);

inline constexpr const char* kEncoderName = "codec.encoder";
inline constexpr const char* kDecoderName = "codec.decoder";

// Both filterbanks [F, W], uniform in +-1/sqrt(W).
template <typename T>
void InitCodec(ad::ParamRegistry<T>& reg, const CodecConfig& cfg, Rng& rng);

// x: [Q, N] -> relu(conv) [Q, F, T]. Throws if N < W.
template <typename T>
ad::Var<T> TfEncode(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg, const CodecConfig& cfg,
                    ad::Var<T> x);

// m: [Q, F, T] -> [Q, length] by transposed convolution, truncated or padded.
template <typename T>
ad::Var<T> TfDecode(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg, const CodecConfig& cfg,
                    ad::Var<T> m, std::size_t length);

}  // namespace pwsep::net

#endif  // PWSEP_NET_CODEC_H_
