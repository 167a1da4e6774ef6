// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/ad/ops.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace pwsep::ad {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;
template <typename T>
using StridedMap = Eigen::Map<RowMat<T>, 0, Eigen::OuterStride<>>;
template <typename T>
using ConstStridedMap = Eigen::Map<const RowMat<T>, 0, Eigen::OuterStride<>>;
template <typename T>
using RowVec = Eigen::Matrix<T, 1, Eigen::Dynamic>;

template <typename T>
bool NeedsGrad(const Var<T>& v) {
  return v.valid() && v.requires_grad();
}

template <typename T>
bool AnyNeedsGrad(std::initializer_list<Var<T>> vars) {
  for (const auto& v : vars) {
    if (NeedsGrad(v)) return true;
  }
  return false;
}

template <typename T>
ConstMatMap<T> AsMatrix(const Buffer<T>& v, std::size_t rows, std::size_t cols) {
  return ConstMatMap<T>(v.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

template <typename T>
MatMap<T> AsMatrix(Buffer<T>& v, std::size_t rows, std::size_t cols) {
  return MatMap<T>(v.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

std::vector<std::size_t> RowMajorStrides(const Shape& shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) strides[i - 1] = strides[i] * shape[i];
  return strides;
}

// Calls f(out_index, in_index) over a row-major walk of `out` where the input
// offset advances by in_strides[d] along output axis d.
template <typename F>
void ForEachStrided(const Shape& out, const std::vector<std::size_t>& in_strides, F&& f) {
  const std::size_t rank = out.size();
  const std::size_t total = NumElements(out);
  if (total == 0) return;
  if (rank == 0) {
    f(std::size_t{0}, std::size_t{0});
    return;
  }
  const std::size_t inner = out[rank - 1];
  const std::size_t inner_stride = in_strides[rank - 1];
  const std::size_t outer = total / inner;
  std::vector<std::size_t> idx(rank, 0);
  std::size_t in_off = 0;
  std::size_t o = 0;
  for (std::size_t r = 0; r < outer; ++r) {
    for (std::size_t i = 0; i < inner; ++i) f(o + i, in_off + i * inner_stride);
    o += inner;
    for (std::size_t d = rank - 1; d-- > 0;) {
      ++idx[d];
      in_off += in_strides[d];
      if (idx[d] < out[d]) break;
      in_off -= in_strides[d] * out[d];
      idx[d] = 0;
    }
  }
}

struct Broadcast {
  Shape out;
  std::vector<std::size_t> a_strides;
  std::vector<std::size_t> b_strides;
};

Broadcast MakeBroadcast(const Shape& a, const Shape& b, const char* op) {
  const std::size_t rank = std::max(a.size(), b.size());
  Broadcast bc;
  bc.out.assign(rank, 1);
  bc.a_strides.assign(rank, 0);
  bc.b_strides.assign(rank, 0);
  auto sa = RowMajorStrides(a);
  auto sb = RowMajorStrides(b);
  for (std::size_t i = 0; i < rank; ++i) {
    const std::size_t ia = i + a.size();
    const std::size_t ib = i + b.size();
    const bool has_a = ia >= rank;
    const bool has_b = ib >= rank;
    const std::size_t da = has_a ? a[ia - rank] : 1;
    const std::size_t db = has_b ? b[ib - rank] : 1;
    if (da != db && da != 1 && db != 1) {
      throw ShapeError(op, "cannot broadcast " + ShapeToString(a) + " with " + ShapeToString(b) +
                               " at axis " + std::to_string(i));
    }
    bc.out[i] = std::max(da, db);
    if (has_a && da != 1) bc.a_strides[i] = sa[ia - rank];
    if (has_b && db != 1) bc.b_strides[i] = sb[ib - rank];
  }
  return bc;
}

// Calls f(out_index, a_index, b_index).
template <typename F>
void ForEachBroadcast(const Broadcast& bc, F&& f) {
  const std::size_t rank = bc.out.size();
  const std::size_t total = NumElements(bc.out);
  if (total == 0) return;
  if (rank == 0) {
    f(std::size_t{0}, std::size_t{0}, std::size_t{0});
    return;
  }
  const std::size_t inner = bc.out[rank - 1];
  const std::size_t sa = bc.a_strides[rank - 1];
  const std::size_t sb = bc.b_strides[rank - 1];
  const std::size_t outer = total / inner;
  std::vector<std::size_t> idx(rank, 0);
  std::size_t oa = 0, ob = 0, o = 0;
  for (std::size_t r = 0; r < outer; ++r) {
    for (std::size_t i = 0; i < inner; ++i) f(o + i, oa + i * sa, ob + i * sb);
    o += inner;
    for (std::size_t d = rank - 1; d-- > 0;) {
      ++idx[d];
      oa += bc.a_strides[d];
      ob += bc.b_strides[d];
      if (idx[d] < bc.out[d]) break;
      oa -= bc.a_strides[d] * bc.out[d];
      ob -= bc.b_strides[d] * bc.out[d];
      idx[d] = 0;
    }
  }
}

template <typename T, typename Fwd, typename Deriv>
Var<T> Unary(Var<T> x, Fwd fwd, Deriv deriv) {
  const auto& xv = x.value();
  Buffer<T> y(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) y[i] = fwd(xv[i]);
  const int xid = x.id();
  return x.tape().Record(x.shape(), std::move(y), NeedsGrad(x),
                         [xid, deriv](Tape<T>& tape, int self) {
                           const auto& xv = tape.value(xid);
                           const auto& yv = tape.value(self);
                           const auto& gy = tape.grad(self);
                           auto& gx = tape.grad(xid);
                           for (std::size_t i = 0; i < gx.size(); ++i) {
                             gx[i] += gy[i] * deriv(xv[i], yv[i]);
                           }
                         });
}

void CheckRank(const Shape& s, std::size_t rank, const char* op, const char* what) {
  if (s.size() != rank) {
    throw ShapeError(op, std::string(what) + " must have rank " + std::to_string(rank) +
                             ", got " + ShapeToString(s));
  }
}

template <typename T>
void CheckVector(const Var<T>& v, std::size_t n, const char* op, const char* what) {
  if (!v.valid()) return;
  if (v.shape() != Shape{n}) {
    throw ShapeError(op, std::string(what) + " must have shape [" + std::to_string(n) + "], got " +
                             ShapeToString(v.shape()));
  }
}

template <typename T>
void CheckSameTape(const Var<T>& a, const Var<T>& b, const char* op) {
  if (a.valid() && b.valid() && &a.tape() != &b.tape()) {
    throw std::invalid_argument(std::string(op) + ": operands recorded on different tapes");
  }
}

}  // namespace

std::size_t ConvFrameCount(std::size_t length, std::size_t kernel, std::size_t stride) {
  if (kernel == 0 || stride == 0) throw ShapeError("conv1d", "kernel and stride must be positive");
  if (length < kernel) {
    throw ShapeError("conv1d", "signal length " + std::to_string(length) +
                                   " shorter than kernel " + std::to_string(kernel));
  }
  return (length - kernel) / stride + 1;
}

std::size_t ChunkCount(std::size_t frames, std::size_t chunk, std::size_t hop) {
  if (chunk == 0 || hop == 0) throw ShapeError("chunk", "chunk and hop must be positive");
  if (frames <= chunk) return 1;
  return (frames - chunk + hop - 1) / hop + 1;
}

// ---------------------------------------------------------------------------
// matmul / linear

template <typename T>
Var<T> Matmul(Var<T> a, Var<T> b) {
  CheckSameTape(a, b, "matmul");
  const Shape sa = a.shape();
  const Shape sb = b.shape();
  if (sa.size() < 2 || sb.size() < 2) {
    throw ShapeError("matmul", "operands need rank >= 2, got " + ShapeToString(sa) + " and " +
                                   ShapeToString(sb));
  }
  const std::size_t m = sa[sa.size() - 2], k = sa.back();
  const std::size_t kb = sb[sb.size() - 2], n = sb.back();
  if (k != kb) {
    throw ShapeError("matmul", "inner dimensions differ: " + ShapeToString(sa) + " x " +
                                   ShapeToString(sb) + " (" + std::to_string(k) + " vs " +
                                   std::to_string(kb) + ")");
  }
  const Shape ba(sa.begin(), sa.end() - 2);
  const Shape bb(sb.begin(), sb.end() - 2);
  Shape batch;
  if (ba == bb || bb.empty()) {
    batch = ba;
  } else if (ba.empty()) {
    batch = bb;
  } else {
    throw ShapeError("matmul", "batch shapes differ: " + ShapeToString(ba) + " vs " +
                                   ShapeToString(bb));
  }
  const std::size_t nb = NumElements(batch);
  const bool a_shared = ba.empty() && !bb.empty();
  const bool b_shared = bb.empty() && !ba.empty();
  Shape out_shape = batch;
  out_shape.push_back(m);
  out_shape.push_back(n);
  Buffer<T> out(nb * m * n);
  const auto& av = a.value();
  const auto& bv = b.value();
  if (b_shared) {
    AsMatrix(out, nb * m, n).noalias() = AsMatrix(av, nb * m, k) * AsMatrix(bv, k, n);
  } else {
    for (std::size_t i = 0; i < nb; ++i) {
      const T* ap = av.data() + (a_shared ? 0 : i * m * k);
      const T* bp = bv.data() + i * k * n;
      MatMap<T>(out.data() + i * m * n, m, n).noalias() =
          ConstMatMap<T>(ap, m, k) * ConstMatMap<T>(bp, k, n);
    }
  }
  const int aid = a.id(), bid = b.id();
  return a.tape().Record(
      std::move(out_shape), std::move(out), AnyNeedsGrad({a, b}),
      [=](Tape<T>& tape, int self) {
        const auto& gy = tape.grad(self);
        const auto& av = tape.value(aid);
        const auto& bv = tape.value(bid);
        if (b_shared) {
          auto G = AsMatrix(gy, nb * m, n);
          if (tape.requires_grad(aid)) {
            AsMatrix(tape.grad(aid), nb * m, k).noalias() += G * AsMatrix(bv, k, n).transpose();
          }
          if (tape.requires_grad(bid)) {
            AsMatrix(tape.grad(bid), k, n).noalias() += AsMatrix(av, nb * m, k).transpose() * G;
          }
          return;
        }
        for (std::size_t i = 0; i < nb; ++i) {
          ConstMatMap<T> G(gy.data() + i * m * n, m, n);
          const std::size_t aoff = a_shared ? 0 : i * m * k;
          const std::size_t boff = i * k * n;
          if (tape.requires_grad(aid)) {
            MatMap<T>(tape.grad(aid).data() + aoff, m, k).noalias() +=
                G * ConstMatMap<T>(bv.data() + boff, k, n).transpose();
          }
          if (tape.requires_grad(bid)) {
            MatMap<T>(tape.grad(bid).data() + boff, k, n).noalias() +=
                ConstMatMap<T>(av.data() + aoff, m, k).transpose() * G;
          }
        }
      });
}

template <typename T>
Var<T> Linear(Var<T> x, Var<T> weight, Var<T> bias) {
  CheckSameTape(x, weight, "linear");
  CheckSameTape(x, bias, "linear");
  const Shape& sx = x.shape();
  CheckRank(weight.shape(), 2, "linear", "weight");
  const std::size_t in = weight.dim(0), out_f = weight.dim(1);
  if (sx.empty() || sx.back() != in) {
    throw ShapeError("linear", "input " + ShapeToString(sx) + " last axis does not match weight " +
                                   ShapeToString(weight.shape()));
  }
  CheckVector(bias, out_f, "linear", "bias");
  const std::size_t rows = x.size() / in;
  Shape out_shape = sx;
  out_shape.back() = out_f;
  Buffer<T> y(rows * out_f);
  auto Y = AsMatrix(y, rows, out_f);
  Y.noalias() = AsMatrix(x.value(), rows, in) * AsMatrix(weight.value(), in, out_f);
  if (bias.valid()) {
    Eigen::Map<const RowVec<T>> bv(bias.value().data(), out_f);
    Y.rowwise() += bv;
  }
  const int xid = x.id(), wid = weight.id();
  const int bid = bias.valid() ? bias.id() : -1;
  return x.tape().Record(
      std::move(out_shape), std::move(y), AnyNeedsGrad({x, weight, bias}),
      [=](Tape<T>& tape, int self) {
        auto G = AsMatrix(tape.grad(self), rows, out_f);
        if (tape.requires_grad(xid)) {
          AsMatrix(tape.grad(xid), rows, in).noalias() +=
              G * AsMatrix(tape.value(wid), in, out_f).transpose();
        }
        if (tape.requires_grad(wid)) {
          AsMatrix(tape.grad(wid), in, out_f).noalias() +=
              AsMatrix(tape.value(xid), rows, in).transpose() * G;
        }
        if (bid >= 0 && tape.requires_grad(bid)) {
          Eigen::Map<RowVec<T>>(tape.grad(bid).data(), out_f) += G.colwise().sum();
        }
      });
}

// ---------------------------------------------------------------------------
// convolution

template <typename T>
Var<T> Conv1d(Var<T> x, Var<T> filters, std::size_t stride) {
  CheckSameTape(x, filters, "conv1d");
  CheckRank(x.shape(), 2, "conv1d", "input");
  CheckRank(filters.shape(), 2, "conv1d", "filters");
  const std::size_t B = x.dim(0), N = x.dim(1);
  const std::size_t F = filters.dim(0), W = filters.dim(1);
  if (stride == 0) throw ShapeError("conv1d", "stride must be positive");
  const std::size_t T_frames = ConvFrameCount(N, W, stride);
  const auto& xv = x.value();
  auto frames = std::make_shared<Buffer<T>>(B * T_frames * W);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t t = 0; t < T_frames; ++t) {
      std::copy_n(xv.data() + b * N + t * stride, W, frames->data() + (b * T_frames + t) * W);
    }
  }
  // [B*T, F] then transpose per batch into [B, F, T].
  RowMat<T> bt_f = AsMatrix(*frames, B * T_frames, W) * AsMatrix(filters.value(), F, W).transpose();
  Buffer<T> y(B * F * T_frames);
  for (std::size_t b = 0; b < B; ++b) {
    MatMap<T>(y.data() + b * F * T_frames, F, T_frames) =
        bt_f.middleRows(b * T_frames, T_frames).transpose();
  }
  const int xid = x.id(), fid = filters.id();
  return x.tape().Record(
      {B, F, T_frames}, std::move(y), AnyNeedsGrad({x, filters}),
      [=](Tape<T>& tape, int self) {
        const auto& gy = tape.grad(self);
        RowMat<T> g_bt(B * T_frames, F);
        for (std::size_t b = 0; b < B; ++b) {
          g_bt.middleRows(b * T_frames, T_frames) =
              ConstMatMap<T>(gy.data() + b * F * T_frames, F, T_frames).transpose();
        }
        if (tape.requires_grad(fid)) {
          AsMatrix(tape.grad(fid), F, W).noalias() +=
              g_bt.transpose() * AsMatrix(*frames, B * T_frames, W);
        }
        if (tape.requires_grad(xid)) {
          RowMat<T> g_frames = g_bt * AsMatrix(tape.value(fid), F, W);
          auto& gx = tape.grad(xid);
          for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t t = 0; t < T_frames; ++t) {
              T* dst = gx.data() + b * N + t * stride;
              const T* src = g_frames.data() + (b * T_frames + t) * W;
              for (std::size_t w = 0; w < W; ++w) dst[w] += src[w];
            }
          }
        }
      });
}

template <typename T>
Var<T> Conv1dTranspose(Var<T> x, Var<T> filters, std::size_t stride, std::size_t out_len) {
  CheckSameTape(x, filters, "conv1d_transpose");
  CheckRank(x.shape(), 3, "conv1d_transpose", "input");
  CheckRank(filters.shape(), 2, "conv1d_transpose", "filters");
  const std::size_t B = x.dim(0), F = x.dim(1), T_frames = x.dim(2);
  if (filters.dim(0) != F) {
    throw ShapeError("conv1d_transpose", "input features " + std::to_string(F) +
                                             " do not match filters " +
                                             ShapeToString(filters.shape()));
  }
  if (stride == 0) throw ShapeError("conv1d_transpose", "stride must be positive");
  const std::size_t W = filters.dim(1);
  const auto& xv = x.value();
  // x transposed per batch: [B*T, F].
  auto xt = std::make_shared<RowMat<T>>(B * T_frames, F);
  for (std::size_t b = 0; b < B; ++b) {
    xt->middleRows(b * T_frames, T_frames) =
        ConstMatMap<T>(xv.data() + b * F * T_frames, F, T_frames).transpose();
  }
  RowMat<T> frames = (*xt) * AsMatrix(filters.value(), F, W);
  Buffer<T> y(B * out_len, T(0));
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t t = 0; t < T_frames; ++t) {
      const std::size_t start = t * stride;
      if (start >= out_len) break;
      const std::size_t n = std::min(W, out_len - start);
      const T* src = frames.data() + (b * T_frames + t) * W;
      T* dst = y.data() + b * out_len + start;
      for (std::size_t w = 0; w < n; ++w) dst[w] += src[w];
    }
  }
  const int xid = x.id(), fid = filters.id();
  return x.tape().Record(
      {B, out_len}, std::move(y), AnyNeedsGrad({x, filters}),
      [=](Tape<T>& tape, int self) {
        const auto& gy = tape.grad(self);
        RowMat<T> g_frames = RowMat<T>::Zero(B * T_frames, W);
        for (std::size_t b = 0; b < B; ++b) {
          for (std::size_t t = 0; t < T_frames; ++t) {
            const std::size_t start = t * stride;
            if (start >= out_len) break;
            const std::size_t n = std::min(W, out_len - start);
            for (std::size_t w = 0; w < n; ++w) {
              g_frames(b * T_frames + t, w) = gy[b * out_len + start + w];
            }
          }
        }
        if (tape.requires_grad(fid)) {
          AsMatrix(tape.grad(fid), F, W).noalias() += xt->transpose() * g_frames;
        }
        if (tape.requires_grad(xid)) {
          RowMat<T> g_xt = g_frames * AsMatrix(tape.value(fid), F, W).transpose();
          auto& gx = tape.grad(xid);
          for (std::size_t b = 0; b < B; ++b) {
            MatMap<T>(gx.data() + b * F * T_frames, F, T_frames) +=
                g_xt.middleRows(b * T_frames, T_frames).transpose();
          }
        }
      });
}

// ---------------------------------------------------------------------------
// normalization / softmax

template <typename T>
Var<T> LayerNorm(Var<T> x, Var<T> gain, Var<T> bias, double eps) {
  CheckSameTape(x, gain, "layer_norm");
  CheckSameTape(x, bias, "layer_norm");
  const Shape& sx = x.shape();
  if (sx.empty()) throw ShapeError("layer_norm", "input must have rank >= 1");
  const std::size_t D = sx.back();
  const std::size_t rows = x.size() / D;
  CheckVector(gain, D, "layer_norm", "gain");
  CheckVector(bias, D, "layer_norm", "bias");
  const auto& xv = x.value();
  auto xhat = std::make_shared<Buffer<T>>(xv.size());
  auto rstd = std::make_shared<Buffer<T>>(rows);
  Buffer<T> y(xv.size());
  const T* g = gain.valid() ? gain.value().data() : nullptr;
  const T* bb = bias.valid() ? bias.value().data() : nullptr;
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = xv.data() + r * D;
    double mean = 0;
    for (std::size_t i = 0; i < D; ++i) mean += xr[i];
    mean /= static_cast<double>(D);
    double var = 0;
    for (std::size_t i = 0; i < D; ++i) {
      const double d = xr[i] - mean;
      var += d * d;
    }
    var /= static_cast<double>(D);
    const double rs = 1.0 / std::sqrt(var + eps);
    (*rstd)[r] = static_cast<T>(rs);
    for (std::size_t i = 0; i < D; ++i) {
      const T h = static_cast<T>((xr[i] - mean) * rs);
      (*xhat)[r * D + i] = h;
      y[r * D + i] = (g ? g[i] * h : h) + (bb ? bb[i] : T(0));
    }
  }
  const int xid = x.id();
  const int gid = gain.valid() ? gain.id() : -1;
  const int bid = bias.valid() ? bias.id() : -1;
  return x.tape().Record(
      sx, std::move(y), AnyNeedsGrad({x, gain, bias}), [=](Tape<T>& tape, int self) {
        const auto& gy = tape.grad(self);
        const T* g = gid >= 0 ? tape.value(gid).data() : nullptr;
        T* gg = (gid >= 0 && tape.requires_grad(gid)) ? tape.grad(gid).data() : nullptr;
        T* gb = (bid >= 0 && tape.requires_grad(bid)) ? tape.grad(bid).data() : nullptr;
        T* gx = tape.requires_grad(xid) ? tape.grad(xid).data() : nullptr;
        Buffer<T> dxhat(D);
        for (std::size_t r = 0; r < rows; ++r) {
          const T* gyr = gy.data() + r * D;
          const T* hr = xhat->data() + r * D;
          double mean_d = 0, mean_dh = 0;
          for (std::size_t i = 0; i < D; ++i) {
            if (gg) gg[i] += gyr[i] * hr[i];
            if (gb) gb[i] += gyr[i];
            dxhat[i] = g ? gyr[i] * g[i] : gyr[i];
            mean_d += dxhat[i];
            mean_dh += dxhat[i] * hr[i];
          }
          if (!gx) continue;
          mean_d /= static_cast<double>(D);
          mean_dh /= static_cast<double>(D);
          const double rs = (*rstd)[r];
          for (std::size_t i = 0; i < D; ++i) {
            gx[r * D + i] += static_cast<T>(rs * (dxhat[i] - mean_d - hr[i] * mean_dh));
          }
        }
      });
}

template <typename T>
Var<T> Softmax(Var<T> x) {
  const Shape& sx = x.shape();
  if (sx.empty()) throw ShapeError("softmax", "input must have rank >= 1");
  const std::size_t D = sx.back();
  const std::size_t rows = x.size() / D;
  const auto& xv = x.value();
  Buffer<T> y(xv.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = xv.data() + r * D;
    T* yr = y.data() + r * D;
    const T mx = *std::max_element(xr, xr + D);
    T s = 0;
    for (std::size_t i = 0; i < D; ++i) {
      yr[i] = std::exp(xr[i] - mx);
      s += yr[i];
    }
    for (std::size_t i = 0; i < D; ++i) yr[i] /= s;
  }
  const int xid = x.id();
  return x.tape().Record(sx, std::move(y), NeedsGrad(x), [=](Tape<T>& tape, int self) {
    const auto& yv = tape.value(self);
    const auto& gy = tape.grad(self);
    auto& gx = tape.grad(xid);
    for (std::size_t r = 0; r < rows; ++r) {
      T dot = 0;
      for (std::size_t i = 0; i < D; ++i) dot += gy[r * D + i] * yv[r * D + i];
      for (std::size_t i = 0; i < D; ++i) gx[r * D + i] += yv[r * D + i] * (gy[r * D + i] - dot);
    }
  });
}

// ---------------------------------------------------------------------------
// attention

template <typename T>
Var<T> MultiheadAttention(Var<T> x, const AttentionWeights<T>& w, std::size_t heads) {
  const char* op = "multihead_attention";
  CheckRank(x.shape(), 3, op, "input");
  const std::size_t B = x.dim(0), S = x.dim(1), D = x.dim(2);
  if (heads == 0 || D % heads != 0) {
    throw ShapeError(op, "feature dim " + std::to_string(D) + " not divisible by " +
                             std::to_string(heads) + " heads");
  }
  for (const Var<T>* m : {&w.wq, &w.wk, &w.wv, &w.wo}) {
    if (!m->valid() || m->shape() != Shape{D, D}) {
      throw ShapeError(op, "projection weights must be [" + std::to_string(D) + ", " +
                               std::to_string(D) + "]" +
                               (m->valid() ? ", got " + ShapeToString(m->shape()) : ""));
    }
    CheckSameTape(x, *m, op);
  }
  for (const Var<T>* v : {&w.bq, &w.bk, &w.bv, &w.bo}) {
    CheckVector(*v, D, op, "projection bias");
    CheckSameTape(x, *v, op);
  }
  const std::size_t rows = B * S;
  const std::size_t dh = D / heads;
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(dh)));

  struct Saved {
    RowMat<T> q, k, v, o, p;
  };
  auto saved = std::make_shared<Saved>();
  auto X = AsMatrix(x.value(), rows, D);
  auto project = [&](RowMat<T>& dst, const Var<T>& wm, const Var<T>& bv) {
    dst.noalias() = X * AsMatrix(wm.value(), D, D);
    if (bv.valid()) dst.rowwise() += Eigen::Map<const RowVec<T>>(bv.value().data(), D);
  };
  project(saved->q, w.wq, w.bq);
  project(saved->k, w.wk, w.bk);
  project(saved->v, w.wv, w.bv);
  saved->o.resize(rows, D);
  saved->p.resize(B * heads * S, S);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t h = 0; h < heads; ++h) {
      const std::size_t off = b * S * D + h * dh;
      ConstStridedMap<T> Qb(saved->q.data() + off, S, dh, Eigen::OuterStride<>(D));
      ConstStridedMap<T> Kb(saved->k.data() + off, S, dh, Eigen::OuterStride<>(D));
      ConstStridedMap<T> Vb(saved->v.data() + off, S, dh, Eigen::OuterStride<>(D));
      MatMap<T> P(saved->p.data() + (b * heads + h) * S * S, S, S);
      P.noalias() = (Qb * Kb.transpose()) * scale;
      for (std::size_t i = 0; i < S; ++i) {
        auto row = P.row(i);
        row.array() = (row.array() - row.maxCoeff()).exp();
        row /= row.sum();
      }
      StridedMap<T>(saved->o.data() + off, S, dh, Eigen::OuterStride<>(D)).noalias() = P * Vb;
    }
  }
  Buffer<T> y(rows * D);
  auto Y = AsMatrix(y, rows, D);
  Y.noalias() = saved->o * AsMatrix(w.wo.value(), D, D);
  if (w.bo.valid()) Y.rowwise() += Eigen::Map<const RowVec<T>>(w.bo.value().data(), D);

  const int xid = x.id();
  const int wq = w.wq.id(), wk = w.wk.id(), wv = w.wv.id(), wo = w.wo.id();
  auto bias_id = [](const Var<T>& v) { return v.valid() ? v.id() : -1; };
  const int bq = bias_id(w.bq), bk = bias_id(w.bk), bv = bias_id(w.bv), bo = bias_id(w.bo);
  const bool rg = AnyNeedsGrad({x, w.wq, w.wk, w.wv, w.wo, w.bq, w.bk, w.bv, w.bo});
  return x.tape().Record(
      {B, S, D}, std::move(y), rg, [=](Tape<T>& tape, int self) {
        auto G = AsMatrix(tape.grad(self), rows, D);
        auto wants = [&](int id) { return id >= 0 && tape.requires_grad(id); };
        if (wants(wo)) AsMatrix(tape.grad(wo), D, D).noalias() += saved->o.transpose() * G;
        if (wants(bo)) Eigen::Map<RowVec<T>>(tape.grad(bo).data(), D) += G.colwise().sum();
        const bool upstream =
            wants(xid) || wants(wq) || wants(wk) || wants(wv) || wants(bq) || wants(bk) || wants(bv);
        if (!upstream) return;
        RowMat<T> dO = G * AsMatrix(tape.value(wo), D, D).transpose();
        RowMat<T> dQ = RowMat<T>::Zero(rows, D);
        RowMat<T> dK = RowMat<T>::Zero(rows, D);
        RowMat<T> dV = RowMat<T>::Zero(rows, D);
        RowMat<T> dP(S, S);
        for (std::size_t b = 0; b < B; ++b) {
          for (std::size_t h = 0; h < heads; ++h) {
            const std::size_t off = b * S * D + h * dh;
            const Eigen::OuterStride<> st(D);
            ConstStridedMap<T> Qb(saved->q.data() + off, S, dh, st);
            ConstStridedMap<T> Kb(saved->k.data() + off, S, dh, st);
            ConstStridedMap<T> Vb(saved->v.data() + off, S, dh, st);
            ConstStridedMap<T> dOb(dO.data() + off, S, dh, st);
            ConstMatMap<T> P(saved->p.data() + (b * heads + h) * S * S, S, S);
            dP.noalias() = dOb * Vb.transpose();
            StridedMap<T>(dV.data() + off, S, dh, st).noalias() += P.transpose() * dOb;
            // softmax backward, reusing dP as the score gradient
            for (std::size_t i = 0; i < S; ++i) {
              const T dot = dP.row(i).dot(P.row(i));
              dP.row(i) = (P.row(i).array() * (dP.row(i).array() - dot)).matrix() * scale;
            }
            StridedMap<T>(dQ.data() + off, S, dh, st).noalias() += dP * Kb;
            StridedMap<T>(dK.data() + off, S, dh, st).noalias() += dP.transpose() * Qb;
          }
        }
        auto Xv = AsMatrix(tape.value(xid), rows, D);
        const std::pair<int, const RowMat<T>*> proj[] = {{wq, &dQ}, {wk, &dK}, {wv, &dV}};
        const int biases[] = {bq, bk, bv};
        for (int i = 0; i < 3; ++i) {
          const auto& [wid, dmat] = proj[i];
          if (wants(wid)) AsMatrix(tape.grad(wid), D, D).noalias() += Xv.transpose() * (*dmat);
          if (wants(biases[i])) {
            Eigen::Map<RowVec<T>>(tape.grad(biases[i]).data(), D) += dmat->colwise().sum();
          }
        }
        if (wants(xid)) {
          auto gX = AsMatrix(tape.grad(xid), rows, D);
          gX.noalias() += dQ * AsMatrix(tape.value(wq), D, D).transpose();
          gX.noalias() += dK * AsMatrix(tape.value(wk), D, D).transpose();
          gX.noalias() += dV * AsMatrix(tape.value(wv), D, D).transpose();
        }
      });
}

// ---------------------------------------------------------------------------
// activations

template <typename T>
Var<T> Relu(Var<T> x) {
  return Unary(
      x, [](T v) { return v > T(0) ? v : T(0); },
      [](T v, T) { return v > T(0) ? T(1) : T(0); });
}

template <typename T>
Var<T> Prelu(Var<T> x, Var<T> slope) {
  CheckSameTape(x, slope, "prelu");
  CheckVector(slope, 1, "prelu", "slope");
  if (!slope.valid()) throw ShapeError("prelu", "slope parameter required");
  const T a = slope.value()[0];
  const auto& xv = x.value();
  Buffer<T> y(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) y[i] = xv[i] > T(0) ? xv[i] : a * xv[i];
  const int xid = x.id(), sid = slope.id();
  return x.tape().Record(x.shape(), std::move(y), AnyNeedsGrad({x, slope}),
                         [=](Tape<T>& tape, int self) {
                           const auto& xv = tape.value(xid);
                           const auto& gy = tape.grad(self);
                           const T a = tape.value(sid)[0];
                           if (tape.requires_grad(xid)) {
                             auto& gx = tape.grad(xid);
                             for (std::size_t i = 0; i < xv.size(); ++i) {
                               if (xv[i] > T(0)) {
                                 gx[i] += gy[i];
                               } else if (xv[i] < T(0)) {
                                 gx[i] += a * gy[i];
                               }
                             }
                           }
                           if (tape.requires_grad(sid)) {
                             T acc = 0;
                             for (std::size_t i = 0; i < xv.size(); ++i) {
                               if (xv[i] < T(0)) acc += gy[i] * xv[i];
                             }
                             tape.grad(sid)[0] += acc;
                           }
                         });
}

template <typename T>
Var<T> Tanh(Var<T> x) {
  return Unary(
      x, [](T v) { return std::tanh(v); }, [](T, T y) { return T(1) - y * y; });
}

template <typename T>
Var<T> Sigmoid(Var<T> x) {
  return Unary(
      x, [](T v) { return T(1) / (T(1) + std::exp(-v)); }, [](T, T y) { return y * (T(1) - y); });
}

// ---------------------------------------------------------------------------
// elementwise binary

template <typename T>
Var<T> Add(Var<T> a, Var<T> b) {
  CheckSameTape(a, b, "add");
  const auto& av = a.value();
  const auto& bv = b.value();
  const int aid = a.id(), bid = b.id();
  if (a.shape() == b.shape()) {
    Buffer<T> y(av.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = av[i] + bv[i];
    return a.tape().Record(a.shape(), std::move(y), AnyNeedsGrad({a, b}),
                           [=](Tape<T>& tape, int self) {
                             const auto& gy = tape.grad(self);
                             for (int id : {aid, bid}) {
                               if (!tape.requires_grad(id)) continue;
                               auto& g = tape.grad(id);
                               for (std::size_t i = 0; i < g.size(); ++i) g[i] += gy[i];
                             }
                           });
  }
  auto bc = std::make_shared<Broadcast>(MakeBroadcast(a.shape(), b.shape(), "add"));
  Buffer<T> y(NumElements(bc->out));
  ForEachBroadcast(*bc, [&](std::size_t o, std::size_t ia, std::size_t ib) { y[o] = av[ia] + bv[ib]; });
  return a.tape().Record(bc->out, std::move(y), AnyNeedsGrad({a, b}),
                         [=](Tape<T>& tape, int self) {
                           const auto& gy = tape.grad(self);
                           const bool ga = tape.requires_grad(aid);
                           const bool gb = tape.requires_grad(bid);
                           T* pa = ga ? tape.grad(aid).data() : nullptr;
                           T* pb = gb ? tape.grad(bid).data() : nullptr;
                           ForEachBroadcast(*bc, [&](std::size_t o, std::size_t ia, std::size_t ib) {
                             if (pa) pa[ia] += gy[o];
                             if (pb) pb[ib] += gy[o];
                           });
                         });
}

template <typename T>
Var<T> Mul(Var<T> a, Var<T> b) {
  CheckSameTape(a, b, "mul");
  const auto& av = a.value();
  const auto& bv = b.value();
  const int aid = a.id(), bid = b.id();
  if (a.shape() == b.shape()) {
    Buffer<T> y(av.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = av[i] * bv[i];
    return a.tape().Record(a.shape(), std::move(y), AnyNeedsGrad({a, b}),
                           [=](Tape<T>& tape, int self) {
                             const auto& gy = tape.grad(self);
                             const auto& av = tape.value(aid);
                             const auto& bv = tape.value(bid);
                             if (tape.requires_grad(aid)) {
                               auto& g = tape.grad(aid);
                               for (std::size_t i = 0; i < g.size(); ++i) g[i] += gy[i] * bv[i];
                             }
                             if (tape.requires_grad(bid)) {
                               auto& g = tape.grad(bid);
                               for (std::size_t i = 0; i < g.size(); ++i) g[i] += gy[i] * av[i];
                             }
                           });
  }
  auto bc = std::make_shared<Broadcast>(MakeBroadcast(a.shape(), b.shape(), "mul"));
  Buffer<T> y(NumElements(bc->out));
  ForEachBroadcast(*bc, [&](std::size_t o, std::size_t ia, std::size_t ib) { y[o] = av[ia] * bv[ib]; });
  return a.tape().Record(bc->out, std::move(y), AnyNeedsGrad({a, b}),
                         [=](Tape<T>& tape, int self) {
                           const auto& gy = tape.grad(self);
                           const auto& av = tape.value(aid);
                           const auto& bv = tape.value(bid);
                           T* pa = tape.requires_grad(aid) ? tape.grad(aid).data() : nullptr;
                           T* pb = tape.requires_grad(bid) ? tape.grad(bid).data() : nullptr;
                           ForEachBroadcast(*bc, [&](std::size_t o, std::size_t ia, std::size_t ib) {
                             if (pa) pa[ia] += gy[o] * bv[ib];
                             if (pb) pb[ib] += gy[o] * av[ia];
                           });
                         });
}

// ---------------------------------------------------------------------------
// shape ops

template <typename T>
Var<T> Reshape(Var<T> x, Shape shape) {
  if (NumElements(shape) != x.size()) {
    throw ShapeError("reshape", "cannot reshape " + ShapeToString(x.shape()) + " to " +
                                    ShapeToString(shape));
  }
  const int xid = x.id();
  return x.tape().Record(std::move(shape), x.value(), NeedsGrad(x), [=](Tape<T>& tape, int self) {
    const auto& gy = tape.grad(self);
    auto& gx = tape.grad(xid);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += gy[i];
  });
}

template <typename T>
Var<T> Permute(Var<T> x, const std::vector<std::size_t>& perm) {
  const Shape& sx = x.shape();
  if (perm.size() != sx.size()) {
    throw ShapeError("permute", "permutation of length " + std::to_string(perm.size()) +
                                    " for input " + ShapeToString(sx));
  }
  std::vector<bool> seen(perm.size(), false);
  for (auto p : perm) {
    if (p >= perm.size() || seen[p]) throw ShapeError("permute", "invalid permutation");
    seen[p] = true;
  }
  const auto in_strides = RowMajorStrides(sx);
  Shape out_shape(sx.size());
  std::vector<std::size_t> strides(sx.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out_shape[i] = sx[perm[i]];
    strides[i] = in_strides[perm[i]];
  }
  const auto& xv = x.value();
  Buffer<T> y(xv.size());
  ForEachStrided(out_shape, strides, [&](std::size_t o, std::size_t i) { y[o] = xv[i]; });
  const int xid = x.id();
  return x.tape().Record(out_shape, std::move(y), NeedsGrad(x), [=](Tape<T>& tape, int self) {
    const auto& gy = tape.grad(self);
    auto& gx = tape.grad(xid);
    ForEachStrided(out_shape, strides, [&](std::size_t o, std::size_t i) { gx[i] += gy[o]; });
  });
}

template <typename T>
Var<T> Chunk(Var<T> x, std::size_t chunk, std::size_t hop) {
  CheckRank(x.shape(), 3, "chunk", "input");
  if (hop == 0 || hop > chunk) throw ShapeError("chunk", "hop must be in [1, chunk]");
  const std::size_t B = x.dim(0), Tn = x.dim(1), F = x.dim(2);
  const std::size_t nc = ChunkCount(Tn, chunk, hop);
  const auto& xv = x.value();
  Buffer<T> y(B * nc * chunk * F, T(0));
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t k = 0; k < nc; ++k) {
      for (std::size_t c = 0; c < chunk; ++c) {
        const std::size_t t = k * hop + c;
        if (t >= Tn) break;
        std::copy_n(xv.data() + (b * Tn + t) * F, F, y.data() + ((b * nc + k) * chunk + c) * F);
      }
    }
  }
  const int xid = x.id();
  return x.tape().Record({B, nc, chunk, F}, std::move(y), NeedsGrad(x),
                         [=](Tape<T>& tape, int self) {
                           const auto& gy = tape.grad(self);
                           auto& gx = tape.grad(xid);
                           for (std::size_t b = 0; b < B; ++b) {
                             for (std::size_t k = 0; k < nc; ++k) {
                               for (std::size_t c = 0; c < chunk; ++c) {
                                 const std::size_t t = k * hop + c;
                                 if (t >= Tn) break;
                                 T* dst = gx.data() + (b * Tn + t) * F;
                                 const T* src = gy.data() + ((b * nc + k) * chunk + c) * F;
                                 for (std::size_t f = 0; f < F; ++f) dst[f] += src[f];
                               }
                             }
                           }
                         });
}

template <typename T>
Var<T> OverlapAdd(Var<T> x, std::size_t hop, std::size_t frames) {
  CheckRank(x.shape(), 4, "overlap_add", "input");
  const std::size_t B = x.dim(0), nc = x.dim(1), chunk = x.dim(2), F = x.dim(3);
  if (hop == 0 || hop > chunk) throw ShapeError("overlap_add", "hop must be in [1, chunk]");
  if (frames == 0 || ChunkCount(frames, chunk, hop) != nc) {
    throw ShapeError("overlap_add", std::to_string(nc) + " chunks of " + std::to_string(chunk) +
                                        " do not cover " + std::to_string(frames) + " frames");
  }
  auto inv_count = std::make_shared<Buffer<T>>(frames, T(0));
  {
    std::vector<std::size_t> count(frames, 0);
    for (std::size_t k = 0; k < nc; ++k) {
      for (std::size_t c = 0; c < chunk && k * hop + c < frames; ++c) ++count[k * hop + c];
    }
    for (std::size_t t = 0; t < frames; ++t) (*inv_count)[t] = T(1) / static_cast<T>(count[t]);
  }
  const auto& xv = x.value();
  Buffer<T> y(B * frames * F, T(0));
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t k = 0; k < nc; ++k) {
      for (std::size_t c = 0; c < chunk; ++c) {
        const std::size_t t = k * hop + c;
        if (t >= frames) break;
        T* dst = y.data() + (b * frames + t) * F;
        const T* src = xv.data() + ((b * nc + k) * chunk + c) * F;
        for (std::size_t f = 0; f < F; ++f) dst[f] += src[f];
      }
    }
    for (std::size_t t = 0; t < frames; ++t) {
      T* row = y.data() + (b * frames + t) * F;
      for (std::size_t f = 0; f < F; ++f) row[f] *= (*inv_count)[t];
    }
  }
  const int xid = x.id();
  return x.tape().Record({B, frames, F}, std::move(y), NeedsGrad(x),
                         [=](Tape<T>& tape, int self) {
                           const auto& gy = tape.grad(self);
                           auto& gx = tape.grad(xid);
                           for (std::size_t b = 0; b < B; ++b) {
                             for (std::size_t k = 0; k < nc; ++k) {
                               for (std::size_t c = 0; c < chunk; ++c) {
                                 const std::size_t t = k * hop + c;
                                 if (t >= frames) break;
                                 const T s = (*inv_count)[t];
                                 const T* src = gy.data() + (b * frames + t) * F;
                                 T* dst = gx.data() + ((b * nc + k) * chunk + c) * F;
                                 for (std::size_t f = 0; f < F; ++f) dst[f] += s * src[f];
                               }
                             }
                           }
                         });
}

template <typename T>
Var<T> FitLength(Var<T> x, std::size_t axis, std::size_t length) {
  const Shape& sx = x.shape();
  if (axis >= sx.size()) {
    throw ShapeError("fit_length", "axis " + std::to_string(axis) + " out of range for " +
                                       ShapeToString(sx));
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= sx[i];
  for (std::size_t i = axis + 1; i < sx.size(); ++i) inner *= sx[i];
  const std::size_t n = sx[axis];
  const std::size_t keep = std::min(n, length) * inner;
  Shape out_shape = sx;
  out_shape[axis] = length;
  const auto& xv = x.value();
  Buffer<T> y(outer * length * inner, T(0));
  for (std::size_t o = 0; o < outer; ++o) {
    std::copy_n(xv.data() + o * n * inner, keep, y.data() + o * length * inner);
  }
  const int xid = x.id();
  return x.tape().Record(std::move(out_shape), std::move(y), NeedsGrad(x),
                         [=](Tape<T>& tape, int self) {
                           const auto& gy = tape.grad(self);
                           auto& gx = tape.grad(xid);
                           for (std::size_t o = 0; o < outer; ++o) {
                             const T* src = gy.data() + o * length * inner;
                             T* dst = gx.data() + o * n * inner;
                             for (std::size_t i = 0; i < keep; ++i) dst[i] += src[i];
                           }
                         });
}

template <typename T>
Var<T> Sum(Var<T> x) {
  const auto& xv = x.value();
  double s = 0;
  for (auto v : xv) s += v;
  const int xid = x.id();
  return x.tape().Record({1}, {static_cast<T>(s)}, NeedsGrad(x), [=](Tape<T>& tape, int self) {
    const T g = tape.grad(self)[0];
    for (auto& v : tape.grad(xid)) v += g;
  });
}

template <typename T>
Var<T> Scale(Var<T> x, double factor) {
  const T f = static_cast<T>(factor);
  return Unary(
      x, [f](T v) { return v * f; }, [f](T, T) { return f; });
}

// ---------------------------------------------------------------------------
// dispatch

std::string_view OpKindName(OpKind kind) {
  switch (kind) {
    case OpKind::kMatmul: return "matmul";
    case OpKind::kConv1d: return "conv1d";
    case OpKind::kConv1dTranspose: return "conv1d_transpose";
    case OpKind::kLinear: return "linear";
    case OpKind::kLayerNorm: return "layer_norm";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kMultiheadAttention: return "multihead_attention";
    case OpKind::kRelu: return "relu";
    case OpKind::kPrelu: return "prelu";
    case OpKind::kTanh: return "tanh";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kAdd: return "add";
    case OpKind::kMul: return "mul";
    case OpKind::kReshape: return "reshape";
    case OpKind::kPermute: return "permute";
  }
  return "unknown";
}

std::vector<OpKind> AllOpKinds() {
  return {OpKind::kMatmul,  OpKind::kConv1d,    OpKind::kConv1dTranspose, OpKind::kLinear,
          OpKind::kLayerNorm, OpKind::kSoftmax, OpKind::kMultiheadAttention, OpKind::kRelu,
          OpKind::kPrelu,   OpKind::kTanh,      OpKind::kSigmoid,         OpKind::kAdd,
          OpKind::kMul,     OpKind::kReshape,   OpKind::kPermute};
}

template <typename T>
Var<T> ForwardOp(OpKind kind, std::span<const Var<T>> inputs, std::span<const Var<T>> params,
                 const OpAttrs& attrs) {
  auto need = [&](std::size_t n_in, std::size_t n_par) {
    if (inputs.size() < n_in || params.size() < n_par) {
      throw ShapeError(std::string(OpKindName(kind)),
                       "expected " + std::to_string(n_in) + " inputs and " +
                           std::to_string(n_par) + " params");
    }
  };
  auto param_or_none = [&](std::size_t i) { return i < params.size() ? params[i] : Var<T>(); };
  switch (kind) {
    case OpKind::kMatmul: need(2, 0); return Matmul(inputs[0], inputs[1]);
    case OpKind::kConv1d: need(1, 1); return Conv1d(inputs[0], params[0], attrs.stride);
    case OpKind::kConv1dTranspose:
      need(1, 1);
      return Conv1dTranspose(inputs[0], params[0], attrs.stride, attrs.out_len);
    case OpKind::kLinear: need(1, 1); return Linear(inputs[0], params[0], param_or_none(1));
    case OpKind::kLayerNorm:
      need(1, 0);
      return LayerNorm(inputs[0], param_or_none(0), param_or_none(1), attrs.eps);
    case OpKind::kSoftmax: need(1, 0); return Softmax(inputs[0]);
    case OpKind::kMultiheadAttention: {
      need(1, 4);
      AttentionWeights<T> w{params[0], params[1], params[2], params[3],
                            param_or_none(4), param_or_none(5), param_or_none(6), param_or_none(7)};
      return MultiheadAttention(inputs[0], w, attrs.heads);
    }
    case OpKind::kRelu: need(1, 0); return Relu(inputs[0]);
    case OpKind::kPrelu: need(1, 1); return Prelu(inputs[0], params[0]);
    case OpKind::kTanh: need(1, 0); return Tanh(inputs[0]);
    case OpKind::kSigmoid: need(1, 0); return Sigmoid(inputs[0]);
    case OpKind::kAdd: need(2, 0); return Add(inputs[0], inputs[1]);
    case OpKind::kMul: need(2, 0); return Mul(inputs[0], inputs[1]);
    case OpKind::kReshape: need(1, 0); return Reshape(inputs[0], attrs.shape);
    case OpKind::kPermute: need(1, 0); return Permute(inputs[0], attrs.perm);
  }
  throw std::invalid_argument("ForwardOp: unknown op kind");
}

#define PWSEP_INSTANTIATE_OPS(T)                                                              \
  template Var<T> Matmul(Var<T>, Var<T>);                                                     \
  template Var<T> Linear(Var<T>, Var<T>, Var<T>);                                             \
  template Var<T> Conv1d(Var<T>, Var<T>, std::size_t);                                        \
  template Var<T> Conv1dTranspose(Var<T>, Var<T>, std::size_t, std::size_t);                  \
  template Var<T> LayerNorm(Var<T>, Var<T>, Var<T>, double);                                  \
  template Var<T> Softmax(Var<T>);                                                            \
  template Var<T> MultiheadAttention(Var<T>, const AttentionWeights<T>&, std::size_t);        \
  template Var<T> Relu(Var<T>);                                                               \
  template Var<T> Prelu(Var<T>, Var<T>);                                                      \
  template Var<T> Tanh(Var<T>);                                                               \
  template Var<T> Sigmoid(Var<T>);                                                            \
  template Var<T> Add(Var<T>, Var<T>);                                                        \
  template Var<T> Mul(Var<T>, Var<T>);                                                        \
  template Var<T> Reshape(Var<T>, Shape);                                                     \
  template Var<T> Permute(Var<T>, const std::vector<std::size_t>&);                           \
  template Var<T> Chunk(Var<T>, std::size_t, std::size_t);                                    \
  template Var<T> OverlapAdd(Var<T>, std::size_t, std::size_t);                               \
  template Var<T> FitLength(Var<T>, std::size_t, std::size_t);                                \
  template Var<T> Sum(Var<T>);                                                                \
  template Var<T> Scale(Var<T>, double);                                                      \
  template Var<T> ForwardOp(OpKind, std::span<const Var<T>>, std::span<const Var<T>>,         \
                            const OpAttrs&);

PWSEP_INSTANTIATE_OPS(float)
PWSEP_INSTANTIATE_OPS(double)

#undef PWSEP_INSTANTIATE_OPS

}  // namespace pwsep::ad
