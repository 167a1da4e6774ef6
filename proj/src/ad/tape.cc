// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/ad/tape.h"

#include <iostream>

namespace pwsep::ad {

template <typename T>
Var<T> Tape<T>::Constant(Tensor<T> t) {
  if (t.data.size() != NumElements(t.shape)) {
    throw ShapeError("Constant", "data length does not match shape " + ShapeToString(t.shape));
  }
  Node n;
  n.shape = std::move(t.shape);
  n.value = std::move(t.data);
  nodes_.push_back(std::move(n));
  return Var<T>(this, static_cast<int>(nodes_.size()) - 1);
}

template <typename T>
Var<T> Tape<T>::Constant(Shape shape, Buffer<T> values) {
  return Constant(Tensor<T>(std::move(shape), std::move(values)));
}

template <typename T>
Var<T> Tape<T>::Param(const std::string& name, Tensor<T>& param) {
  auto it = param_ids_.find(name);
  if (it != param_ids_.end()) return Var<T>(this, it->second);
  Node n;
  n.shape = param.shape;
  n.value = param.data;
  n.requires_grad = param.requires_grad;
  n.param_name = name;
  nodes_.push_back(std::move(n));
  int id = static_cast<int>(nodes_.size()) - 1;
  param_ids_.emplace(name, id);
  return Var<T>(this, id);
}

template <typename T>
Var<T> Tape<T>::Record(Shape shape, Buffer<T> value, bool requires_grad,
                       BackwardFn backward) {
  if (value.size() != NumElements(shape)) {
    throw ShapeError("Tape::Record", "value length " + std::to_string(value.size()) +
                                         " does not match shape " + ShapeToString(shape));
  }
  Node n;
  n.shape = std::move(shape);
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var<T>(this, static_cast<int>(nodes_.size()) - 1);
}

template <typename T>
Buffer<T>& Tape<T>::grad(int id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad.assign(n.value.size(), T(0));
  return n.grad;
}

template <typename T>
GradMap<T> Tape<T>::Backward(Var<T> loss) {
  if (!loss.valid() || &loss.tape() != this) {
    throw std::invalid_argument("Backward: loss was recorded on a different tape");
  }
  const Node& ln = nodes_[loss.id()];
  if (ln.value.size() != 1) {
    throw ShapeError("Backward", "loss must be scalar, got shape " + ShapeToString(ln.shape));
  }
  GradMap<T> out;
  if (!ln.requires_grad) {
    std::cerr << "warning: backward on a loss that does not depend on trainable "
                 "parameters; returning zero gradients\n";
    for (const auto& [name, id] : param_ids_) {
      const Node& p = nodes_[id];
      if (p.requires_grad) out.emplace(name, Tensor<T>(p.shape));
    }
    return out;
  }
  grad(loss.id())[0] = T(1);
  for (int id = loss.id(); id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.requires_grad || n.grad.empty() || !n.backward) continue;
    n.backward(*this, id);
    // Intermediate gradients are no longer needed once propagated.
    Buffer<T>().swap(n.grad);
  }
  for (const auto& [name, id] : param_ids_) {
    Node& p = nodes_[id];
    if (!p.requires_grad) continue;
    Tensor<T> g(p.shape);
    if (!p.grad.empty()) g.data = p.grad;
    out.emplace(name, std::move(g));
  }
  return out;
}

template class Tape<float>;
template class Tape<double>;

}  // namespace pwsep::ad
