// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_AD_OPS_H_
#define PWSEP_AD_OPS_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "pwsep/ad/tape.h"

// Differentiable ops. Tensors are row-major; "features" is always the last
// axis. Each op validates shapes and throws ShapeError naming itself.
namespace pwsep::ad {

// Number of frames of a "valid" strided convolution.
std::size_t ConvFrameCount(std::size_t length, std::size_t kernel, std::size_t stride);

// Number of 50%-style overlapping chunks covering `frames` after tail padding.
std::size_t ChunkCount(std::size_t frames, std::size_t chunk, std::size_t hop);

// a: [..., m, k], b: [..., k, n]. Batch shapes must match, or one operand is
// a plain matrix broadcast over the other's batch.
template <typename T>
Var<T> Matmul(Var<T> a, Var<T> b);

// x: [..., in], weight: [in, out], bias: [out] or invalid Var for none.
template <typename T>
Var<T> Linear(Var<T> x, Var<T> weight, Var<T> bias = Var<T>());

// x: [B, N], filters: [F, W] -> [B, F, T], T = floor((N - W) / stride) + 1.
template <typename T>
Var<T> Conv1d(Var<T> x, Var<T> filters, std::size_t stride);

// x: [B, F, T], filters: [F, W] -> [B, out_len]. The natural output length
// (T - 1) * stride + W is truncated or zero-padded to out_len.
template <typename T>
Var<T> Conv1dTranspose(Var<T> x, Var<T> filters, std::size_t stride, std::size_t out_len);

// Normalizes over the last axis; gain and bias have the size of that axis.
template <typename T>
Var<T> LayerNorm(Var<T> x, Var<T> gain, Var<T> bias, double eps = 1e-5);

template <typename T>
Var<T> Softmax(Var<T> x);

template <typename T>
struct AttentionWeights {
  Var<T> wq, wk, wv, wo;  // [D, D]
  Var<T> bq, bk, bv, bo;  // [D]
};

// Scaled dot-product self-attention. x: [B, S, D], D divisible by heads.
template <typename T>
Var<T> MultiheadAttention(Var<T> x, const AttentionWeights<T>& w, std::size_t heads);

template <typename T>
Var<T> Relu(Var<T> x);
// slope: [1], shared across all elements.
template <typename T>
Var<T> Prelu(Var<T> x, Var<T> slope);
template <typename T>
Var<T> Tanh(Var<T> x);
template <typename T>
Var<T> Sigmoid(Var<T> x);

// Elementwise with numpy-style broadcasting.
template <typename T>
Var<T> Add(Var<T> a, Var<T> b);
template <typename T>
Var<T> Mul(Var<T> a, Var<T> b);

template <typename T>
Var<T> Reshape(Var<T> x, Shape shape);
// Output axis i is input axis perm[i].
template <typename T>
Var<T> Permute(Var<T> x, const std::vector<std::size_t>& perm);

// x: [B, T, F] -> [B, N_C, chunk, F] with hop spacing and zero tail padding.
template <typename T>
Var<T> Chunk(Var<T> x, std::size_t chunk, std::size_t hop);
// Inverse of Chunk: overlap-add divided by the per-frame chunk count, then
// the padding is removed. x: [B, N_C, chunk, F] -> [B, frames, F].
template <typename T>
Var<T> OverlapAdd(Var<T> x, std::size_t hop, std::size_t frames);

// Truncates or zero-pads one axis to `length`.
template <typename T>
Var<T> FitLength(Var<T> x, std::size_t axis, std::size_t length);

template <typename T>
Var<T> Sum(Var<T> x);
template <typename T>
Var<T> Scale(Var<T> x, double factor);

// Uniform entry point over the op kinds, used by the gradient suite.
enum class OpKind {
  kMatmul,
  kConv1d,
  kConv1dTranspose,
  kLinear,
  kLayerNorm,
  kSoftmax,
  kMultiheadAttention,
  kRelu,
  kPrelu,
  kTanh,
  kSigmoid,
  kAdd,
  kMul,
  kReshape,
  kPermute,
};

struct OpAttrs {
  std::size_t stride = 1;
  std::size_t out_len = 0;
  std::size_t heads = 1;
  Shape shape;
  std::vector<std::size_t> perm;
  double eps = 1e-5;
};

std::string_view OpKindName(OpKind kind);
std::vector<OpKind> AllOpKinds();

// inputs carry activations; params carry weights in the order of the
// corresponding function's signature (linear: weight[, bias]; layer_norm:
// gain, bias; attention: wq, wk, wv, wo, bq, bk, bv, bo; prelu: slope;
// conv: filters). Binary elementwise ops and matmul take two inputs.
template <typename T>
Var<T> ForwardOp(OpKind kind, std::span<const Var<T>> inputs, std::span<const Var<T>> params,
                 const OpAttrs& attrs = {});

}  // namespace pwsep::ad

#endif  // PWSEP_AD_OPS_H_
