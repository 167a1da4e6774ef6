// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/net/layers.h"

#include <cmath>

namespace pwsep::net {

template <typename T>
void AddUniform(ad::ParamRegistry<T>& reg, const std::string& name, ad::Shape shape,
                std::size_t fan_in, Rng& rng) {
  auto& t = reg.Add(name, std::move(shape));
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (auto& v : t.data) v = static_cast<T>(rng.Uniform(-bound, bound));
}

template <typename T>
void AddConstant(ad::ParamRegistry<T>& reg, const std::string& name, ad::Shape shape, T value) {
  auto& t = reg.Add(name, std::move(shape));
  std::fill(t.data.begin(), t.data.end(), value);
}

std::size_t TransformerLayerParamCount(std::size_t d, std::size_t d_ff) {
  return 4 * d * d + 4 * d + d * d_ff + d_ff + d_ff * d + d + 4 * d;
}

template <typename T>
void InitTransformerLayer(ad::ParamRegistry<T>& reg, const std::string& prefix, std::size_t d,
                          std::size_t d_ff, Rng& rng) {
  for (const char* w : {"wq", "wk", "wv", "wo"}) AddUniform(reg, prefix + ".attn." + w, {d, d}, d, rng);
  for (const char* b : {"bq", "bk", "bv", "bo"}) AddConstant<T>(reg, prefix + ".attn." + b, {d}, T(0));
  for (const char* ln : {".ln1", ".ln2"}) {
    AddConstant<T>(reg, prefix + ln + ".gain", {d}, T(1));
    AddConstant<T>(reg, prefix + ln + ".bias", {d}, T(0));
  }
  AddUniform(reg, prefix + ".ff.w1", {d, d_ff}, d, rng);
  AddUniform(reg, prefix + ".ff.b1", {d_ff}, d, rng);
  AddUniform(reg, prefix + ".ff.w2", {d_ff, d}, d_ff, rng);
  AddUniform(reg, prefix + ".ff.b2", {d}, d_ff, rng);
}

template <typename T>
std::vector<T> PositionalEncoding(std::size_t seq, std::size_t d) {
  std::vector<T> pe(seq * d);
  for (std::size_t s = 0; s < seq; ++s) {
    for (std::size_t i = 0; i < d; i += 2) {
      const double angle =
          static_cast<double>(s) / std::pow(10000.0, static_cast<double>(i) / static_cast<double>(d));
      pe[s * d + i] = static_cast<T>(std::sin(angle));
      if (i + 1 < d) pe[s * d + i + 1] = static_cast<T>(std::cos(angle));
    }
  }
  return pe;
}

template <typename T>
ad::Var<T> TransformerLayer(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg,
                            const std::string& prefix, ad::Var<T> x, std::size_t heads) {
  if (x.rank() != 3) {
    throw ad::ShapeError("TransformerLayer", "expected [B, S, D], got " + ad::ShapeToString(x.shape()));
  }
  const std::size_t seq = x.dim(1), d = x.dim(2);
  auto p = [&](const std::string& n) { return P(tape, reg, prefix + n); };
  ad::Var<T> pe = tape.Constant({seq, d}, PositionalEncoding<T>(seq, d));
  ad::Var<T> z = ad::Add(ad::LayerNorm(x, p(".ln1.gain"), p(".ln1.bias")), pe);
  ad::AttentionWeights<T> w{p(".attn.wq"), p(".attn.wk"), p(".attn.wv"), p(".attn.wo"),
                            p(".attn.bq"), p(".attn.bk"), p(".attn.bv"), p(".attn.bo")};
  ad::Var<T> x1 = ad::Add(x, ad::MultiheadAttention(z, w, heads));
  ad::Var<T> h = ad::Relu(ad::Linear(ad::LayerNorm(x1, p(".ln2.gain"), p(".ln2.bias")),
                                     p(".ff.w1"), p(".ff.b1")));
  return ad::Add(x1, ad::Linear(h, p(".ff.w2"), p(".ff.b2")));
}

#define PWSEP_INSTANTIATE_LAYERS(T)                                                           \
  template void AddUniform<T>(ad::ParamRegistry<T>&, const std::string&, ad::Shape,           \
                              std::size_t, Rng&);                                             \
  template void AddConstant<T>(ad::ParamRegistry<T>&, const std::string&, ad::Shape, T);      \
  template void InitTransformerLayer<T>(ad::ParamRegistry<T>&, const std::string&,            \
                                        std::size_t, std::size_t, Rng&);                      \
  template ad::Var<T> TransformerLayer<T>(ad::Tape<T>&, ad::ParamRegistry<T>&,                \
                                          const std::string&, ad::Var<T>, std::size_t);       \
  template std::vector<T> PositionalEncoding<T>(std::size_t, std::size_t);

PWSEP_INSTANTIATE_LAYERS(float)
PWSEP_INSTANTIATE_LAYERS(double)

}  // namespace pwsep::net
