// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_NET_LAYERS_H_
#define PWSEP_NET_LAYERS_H_

#include <cstddef>
#include <string>

#include "pwsep/ad/ops.h"
#include "pwsep/util/rng.h"

namespace pwsep::net {

// Binds a registry entry to the tape under its own name.
template <typename T>
ad::Var<T> P(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg, const std::string& name) {
  return tape.Param(name, reg.Get(name));
}

// Registers and fills a weight with U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
template <typename T>
void AddUniform(ad::ParamRegistry<T>& reg, const std::string& name, ad::Shape shape,
                std::size_t fan_in, Rng& rng);

template <typename T>
void AddConstant(ad::ParamRegistry<T>& reg, const std::string& name, ad::Shape shape, T value);

// Pre-norm transformer encoder layer over [B, S, D]:
//   z = LN1(x) + PE;  x1 = x + MHA(z);  y = x1 + W2 relu(W1 LN2(x1) + b1) + b2
// Parameters live under `prefix`: attn.{wq,wk,wv,wo,bq,bk,bv,bo},
// ln1.{gain,bias}, ln2.{gain,bias}, ff.{w1,b1,w2,b2}.
template <typename T>
void InitTransformerLayer(ad::ParamRegistry<T>& reg, const std::string& prefix, std::size_t d,
                          std::size_t d_ff, Rng& rng);

template <typename T>
ad::Var<T> TransformerLayer(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg,
                            const std::string& prefix, ad::Var<T> x, std::size_t heads);

std::size_t TransformerLayerParamCount(std::size_t d, std::size_t d_ff);

// Sinusoidal encoding, [seq, d] row-major.
template <typename T>
std::vector<T> PositionalEncoding(std::size_t seq, std::size_t d);

}  // namespace pwsep::net

#endif  // PWSEP_NET_LAYERS_H_
