// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/net/masknet.h"

#include <stdexcept>

#include "pwsep/net/layers.h"

namespace pwsep::net {

std::string BlockAxisName(BlockAxis axis) {
  switch (axis) {
    case BlockAxis::kInterChannel:
      return "interchannel";
    case BlockAxis::kIntraChunk:
      return "intrachunk";
    case BlockAxis::kInterChunk:
      return "interchunk";
  }
  return "?";
}

std::string BlockOrderName(BlockOrder order) {
  return order == BlockOrder::kInterChannelFirst ? "ichan-first" : "ichan-last";
}

BlockOrder ParseBlockOrder(const std::string& s) {
  if (s == "ichan-first") return BlockOrder::kInterChannelFirst;
  if (s == "ichan-last") return BlockOrder::kInterChannelLast;
  throw std::invalid_argument("unknown block order '" + s + "' (ichan-first or ichan-last)");
}

void MasknetConfig::Validate() const {
  if (features == 0 || repeats == 0 || layers == 0 || ff_dim == 0 || sources == 0 ||
      channels == 0 || heads == 0) {
    throw std::invalid_argument("masknet: all dimensions must be positive");
  }
  if (chunk < 2 || chunk % 2 != 0) throw std::invalid_argument("masknet: chunk length must be even");
  if (features % heads != 0) throw std::invalid_argument("masknet: features must divide into heads");
}

std::vector<BlockAxis> MasknetConfig::Axes() const {
  if (!interchannel) return {BlockAxis::kIntraChunk, BlockAxis::kInterChunk};
  if (order == BlockOrder::kInterChannelFirst) {
    return {BlockAxis::kInterChannel, BlockAxis::kIntraChunk, BlockAxis::kInterChunk};
  }
  return {BlockAxis::kIntraChunk, BlockAxis::kInterChunk, BlockAxis::kInterChannel};
}

std::size_t MasknetParamCount(const MasknetConfig& cfg) {
  const std::size_t f = cfg.features, j = cfg.sources;
  const std::size_t blocks = cfg.repeats * cfg.Axes().size() * cfg.layers;
  // in_norm 2F, in_linear F^2, prelu 1, out_linear JF^2 + JF, gate 2(F^2 + F),
  // final_linear F^2.
  const std::size_t head_tail = 2 * f + f * f + 1 + j * f * f + j * f + 2 * (f * f + f) + f * f;
  return blocks * TransformerLayerParamCount(f, cfg.ff_dim) + head_tail;
}

template <typename T>
void InitTransformerBlock(ad::ParamRegistry<T>& reg, const std::string& prefix,
                          std::size_t layers, std::size_t d, std::size_t d_ff, Rng& rng) {
  for (std::size_t k = 0; k < layers; ++k) {
    InitTransformerLayer(reg, prefix + ".layer" + std::to_string(k), d, d_ff, rng);
  }
}

template <typename T>
void InitMasknet(ad::ParamRegistry<T>& reg, const MasknetConfig& cfg, Rng& rng) {
  cfg.Validate();
  const std::size_t f = cfg.features, j = cfg.sources;
  AddConstant<T>(reg, "masknet.in_norm.gain", {f}, T(1));
  AddConstant<T>(reg, "masknet.in_norm.bias", {f}, T(0));
  AddUniform(reg, "masknet.in_linear.w", {f, f}, f, rng);
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    for (BlockAxis axis : cfg.Axes()) {
      InitTransformerBlock(reg, "masknet.repeat" + std::to_string(r) + "." + BlockAxisName(axis),
                           cfg.layers, f, cfg.ff_dim, rng);
    }
  }
  AddConstant<T>(reg, "masknet.prelu.slope", {1}, T(0.25));
  AddUniform(reg, "masknet.out_linear.w", {f, j * f}, f, rng);
  AddUniform(reg, "masknet.out_linear.b", {j * f}, f, rng);
  AddUniform(reg, "masknet.gate_tanh.w", {f, f}, f, rng);
  AddUniform(reg, "masknet.gate_tanh.b", {f}, f, rng);
  AddUniform(reg, "masknet.gate_sigmoid.w", {f, f}, f, rng);
  AddUniform(reg, "masknet.gate_sigmoid.b", {f}, f, rng);
  AddUniform(reg, "masknet.final_linear.w", {f, f}, f, rng);
}

template <typename T>
ad::Var<T> TransformerBlock(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg,
                            const std::string& prefix, ad::Var<T> x, BlockAxis axis,
                            std::size_t layers, std::size_t heads) {
  if (x.rank() != 4) {
    throw ad::ShapeError("TransformerBlock",
                         "expected [Q, N_C, C, F], got " + ad::ShapeToString(x.shape()));
  }
  const std::size_t q = x.dim(0), nc = x.dim(1), c = x.dim(2), f = x.dim(3);
  auto stack = [&](ad::Var<T> h) {
    for (std::size_t k = 0; k < layers; ++k) {
      h = TransformerLayer(tape, reg, prefix + ".layer" + std::to_string(k), h, heads);
    }
    return h;
  };
  switch (axis) {
    case BlockAxis::kInterChannel: {
      auto h = ad::Reshape(ad::Permute(x, {1, 2, 0, 3}), {nc * c, q, f});
      h = ad::Reshape(stack(h), {nc, c, q, f});
      return ad::Permute(h, {2, 0, 1, 3});
    }
    case BlockAxis::kIntraChunk: {
      auto h = stack(ad::Reshape(x, {q * nc, c, f}));
      return ad::Reshape(h, {q, nc, c, f});
    }
    case BlockAxis::kInterChunk: {
      auto h = ad::Reshape(ad::Permute(x, {0, 2, 1, 3}), {q * c, nc, f});
      h = ad::Reshape(stack(h), {q, c, nc, f});
      return ad::Permute(h, {0, 2, 1, 3});
    }
  }
  throw std::logic_error("TransformerBlock: bad axis");
}

template <typename T>
ad::Var<T> MasknetForward(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg, const MasknetConfig& cfg,
                          ad::Var<T> e) {
  if (e.rank() != 3 || e.dim(0) != cfg.channels || e.dim(1) != cfg.features) {
    throw ad::ShapeError("MasknetForward", "expected [" + std::to_string(cfg.channels) + ", " +
                                               std::to_string(cfg.features) + ", T], got " +
                                               ad::ShapeToString(e.shape()));
  }
  const std::size_t q = cfg.channels, f = cfg.features, j = cfg.sources, t = e.dim(2);
  const std::size_t hop = cfg.chunk / 2;
  auto p = [&](const std::string& n) { return P(tape, reg, "masknet." + n); };

  auto h = ad::Permute(e, {0, 2, 1});  // [Q, T, F]
  h = ad::LayerNorm(h, p("in_norm.gain"), p("in_norm.bias"));
  h = ad::Linear(h, p("in_linear.w"));
  h = ad::Chunk(h, cfg.chunk, hop);  // [Q, N_C, C, F]
  const std::size_t nc = h.dim(1);
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    for (BlockAxis axis : cfg.Axes()) {
      h = TransformerBlock(tape, reg, "masknet.repeat" + std::to_string(r) + "." + BlockAxisName(axis),
                           h, axis, cfg.layers, cfg.heads);
    }
  }
  h = ad::Prelu(h, p("prelu.slope"));
  h = ad::Linear(h, p("out_linear.w"), p("out_linear.b"));  // [Q, N_C, C, J F]
  h = ad::Reshape(h, {q, nc, cfg.chunk, j, f});
  h = ad::Permute(h, {3, 0, 1, 2, 4});  // [J, Q, N_C, C, F]
  h = ad::Reshape(h, {j * q, nc, cfg.chunk, f});
  h = ad::OverlapAdd(h, hop, t);  // [J Q, T, F]
  h = ad::Mul(ad::Tanh(ad::Linear(h, p("gate_tanh.w"), p("gate_tanh.b"))),
              ad::Sigmoid(ad::Linear(h, p("gate_sigmoid.w"), p("gate_sigmoid.b"))));
  h = ad::Relu(ad::Linear(h, p("final_linear.w")));
  h = ad::Reshape(h, {j, q, t, f});
  return ad::Permute(h, {0, 1, 3, 2});
}

template <typename T>
void InitPostTransformer(ad::ParamRegistry<T>& reg, std::size_t f, std::size_t d_ff, Rng& rng) {
  InitTransformerLayer(reg, kPostPrefix, f, d_ff, rng);
}

template <typename T>
ad::Var<T> PostTransformer(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg, ad::Var<T> x,
                           std::size_t f, std::size_t heads) {
  if (x.rank() != 3) {
    throw ad::ShapeError("PostTransformer", "expected [J, Q, N], got " + ad::ShapeToString(x.shape()));
  }
  const std::size_t j = x.dim(0), q = x.dim(1), n = x.dim(2);
  const std::size_t np = (n + f - 1) / f;
  auto h = ad::FitLength(x, 2, np * f);
  h = ad::Reshape(h, {j * q, np, f});
  h = ad::Permute(h, {1, 0, 2});  // [N_P, J Q, F]
  h = TransformerLayer(tape, reg, kPostPrefix, h, heads);
  h = ad::Reshape(ad::Permute(h, {1, 0, 2}), {j, q, np * f});
  return ad::FitLength(h, 2, n);
}

#define PWSEP_INSTANTIATE_MASKNET(T)                                                          \
  template void InitMasknet<T>(ad::ParamRegistry<T>&, const MasknetConfig&, Rng&);            \
  template ad::Var<T> MasknetForward<T>(ad::Tape<T>&, ad::ParamRegistry<T>&,                  \
                                        const MasknetConfig&, ad::Var<T>);                    \
  template ad::Var<T> TransformerBlock<T>(ad::Tape<T>&, ad::ParamRegistry<T>&,                \
                                          const std::string&, ad::Var<T>, BlockAxis,          \
                                          std::size_t, std::size_t);                          \
  template void InitTransformerBlock<T>(ad::ParamRegistry<T>&, const std::string&,            \
                                        std::size_t, std::size_t, std::size_t, Rng&);         \
  template void InitPostTransformer<T>(ad::ParamRegistry<T>&, std::size_t, std::size_t, Rng&); \
  template ad::Var<T> PostTransformer<T>(ad::Tape<T>&, ad::ParamRegistry<T>&, ad::Var<T>,     \
                                         std::size_t, std::size_t);

PWSEP_INSTANTIATE_MASKNET(float)
PWSEP_INSTANTIATE_MASKNET(double)

}  // namespace pwsep::net
