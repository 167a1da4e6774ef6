// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/net/codec.h"

#include <stdexcept>
#include <string>

#include "pwsep/net/layers.h"

namespace pwsep::net {

void CodecConfig::Validate() const {
  if (filters == 0 || kernel == 0 || stride == 0) {
    throw std::invalid_argument("codec: filters, kernel and stride must be positive");
  }
  if (stride > kernel) throw std::invalid_argument("codec: stride must not exceed kernel length");
}

std::size_t CodecConfig::Frames(std::size_t samples) const {
  return ad::ConvFrameCount(samples, kernel, stride);
}

std::size_t CodecParamCount(const CodecConfig& cfg) { return 2 * cfg.filters * cfg.kernel; }

template <typename T>
void InitCodec(ad::ParamRegistry<T>& reg, const CodecConfig& cfg, Rng& rng) {
  cfg.Validate();
  AddUniform(reg, kEncoderName, {cfg.filters, cfg.kernel}, cfg.kernel, rng);
  AddUniform(reg, kDecoderName, {cfg.filters, cfg.kernel}, cfg.kernel, rng);
}

template <typename T>
ad::Var<T> TfEncode(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg, const CodecConfig& cfg,
                    ad::Var<T> x) {
  if (x.rank() != 2) throw ad::ShapeError("TfEncode", "expected [Q, N], got " + ad::ShapeToString(x.shape()));
  if (x.dim(1) < cfg.kernel) {
    throw ad::ShapeError("TfEncode", "signal of " + std::to_string(x.dim(1)) +
                                         " samples is shorter than the kernel (" +
                                         std::to_string(cfg.kernel) + ")");
  }
  return ad::Relu(ad::Conv1d(x, P(tape, reg, kEncoderName), cfg.stride));
}

template <typename T>
ad::Var<T> TfDecode(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg, const CodecConfig& cfg,
                    ad::Var<T> m, std::size_t length) {
  return ad::Conv1dTranspose(m, P(tape, reg, kDecoderName), cfg.stride, length);
}

#define PWSEP_INSTANTIATE_CODEC(T)                                                          \
  template void InitCodec<T>(ad::ParamRegistry<T>&, const CodecConfig&, Rng&);              \
  template ad::Var<T> TfEncode<T>(ad::Tape<T>&, ad::ParamRegistry<T>&, const CodecConfig&,  \
                                  ad::Var<T>);                                              \
  template ad::Var<T> TfDecode<T>(ad::Tape<T>&, ad::ParamRegistry<T>&, const CodecConfig&,  \
                                  ad::Var<T>, std::size_t);

PWSEP_INSTANTIATE_CODEC(float)
PWSEP_INSTANTIATE_CODEC(double)

}  // namespace pwsep::net
