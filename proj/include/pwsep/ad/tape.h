// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_AD_TAPE_H_
#define PWSEP_AD_TAPE_H_

#include <deque>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "pwsep/ad/tensor.h"

namespace pwsep::ad {

template <typename T>
class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; only valid while the
// owning tape is alive.
template <typename T>
class Var {
 public:
  Var() = default;
  Var(Tape<T>* tape, int id) : tape_(tape), id_(id) {}

  bool valid() const { return tape_ != nullptr; }
  Tape<T>& tape() const { return *tape_; }
  int id() const { return id_; }

  const Shape& shape() const;
  const Buffer<T>& value() const;
  bool requires_grad() const;
  std::size_t size() const { return value().size(); }
  std::size_t dim(std::size_t i) const { return shape().at(i); }
  std::size_t rank() const { return shape().size(); }

 private:
  Tape<T>* tape_ = nullptr;
  int id_ = -1;
};

template <typename T>
using GradMap = std::map<std::string, Tensor<T>>;

// Records a forward computation as a linear sequence of nodes. Because nodes
// are appended in evaluation order, reverse iteration is a valid topological
// order for the backward sweep.
template <typename T>
class Tape {
 public:
  using BackwardFn = std::function<void(Tape<T>&, int self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var<T> Constant(Tensor<T> t);
  Var<T> Constant(Shape shape, Buffer<T> values);
  template <typename A>
  Var<T> Constant(Shape shape, const std::vector<T, A>& values) {
    return Constant(std::move(shape), Buffer<T>(values.begin(), values.end()));
  }

  // Leaf bound to a registry tensor. Repeated calls with the same name return
  // the same leaf so gradients accumulate once per parameter.
  Var<T> Param(const std::string& name, Tensor<T>& param);

  // Appends an op result. `requires_grad` should be the OR over the inputs;
  // when false, `backward` is dropped.
  Var<T> Record(Shape shape, Buffer<T> value, bool requires_grad, BackwardFn backward);

  const Shape& shape(int id) const { return nodes_[id].shape; }
  const Buffer<T>& value(int id) const { return nodes_[id].value; }
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }

  // Gradient buffer of a node, zero-allocated on first access.
  Buffer<T>& grad(int id);
  bool has_grad(int id) const { return !nodes_[id].grad.empty(); }

  // Reverse sweep from a scalar loss. Returns gradients for every parameter
  // leaf with requires_grad set. A loss that does not depend on any trainable
  // input yields zero gradients and a warning on stderr.
  GradMap<T> Backward(Var<T> loss);

  std::size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    Shape shape;
    Buffer<T> value;
    Buffer<T> grad;
    bool requires_grad = false;
    std::string param_name;
    BackwardFn backward;
  };

  std::deque<Node> nodes_;
  std::unordered_map<std::string, int> param_ids_;
};

template <typename T>
const Shape& Var<T>::shape() const {
  return tape_->shape(id_);
}

template <typename T>
const Buffer<T>& Var<T>::value() const {
  return tape_->value(id_);
}

template <typename T>
bool Var<T>::requires_grad() const {
  return tape_->requires_grad(id_);
}

// Copies a recorded value out into a standalone tensor.
template <typename T>
Tensor<T> ToTensor(const Var<T>& v) {
  return Tensor<T>(v.shape(), v.value());
}

}  // namespace pwsep::ad

#endif  // PWSEP_AD_TAPE_H_
