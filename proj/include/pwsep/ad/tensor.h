// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_AD_TENSOR_H_
#define PWSEP_AD_TENSOR_H_

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pwsep::ad {

using Shape = std::vector<std::size_t>;

// Storage for tensor values. Eigen picks its packet/scalar split from the
// address of a mapped buffer, so a fixed alignment keeps float results
// independent of where the allocator placed each buffer.
template <typename T>
using Buffer = std::vector<T, Eigen::aligned_allocator<T>>;

std::size_t NumElements(const Shape& shape);
std::string ShapeToString(const Shape& shape);

// Raised by every op when input shapes are incompatible. The message names
// the op and the offending dimensions.
class ShapeError : public std::invalid_argument {
 public:
  ShapeError(const std::string& op, const std::string& detail);
  const std::string& op() const { return op_; }

 private:
  std::string op_;
};

template <typename T>
struct Tensor {
  Shape shape;
  Buffer<T> data;
  bool requires_grad = false;

  Tensor() = default;
  explicit Tensor(Shape s, T fill = T(0))
      : shape(std::move(s)), data(NumElements(shape), fill) {}
  template <typename A>
  Tensor(Shape s, const std::vector<T, A>& values) : Tensor(std::move(s), Buffer<T>(values.begin(), values.end())) {}
  Tensor(Shape s, Buffer<T> values) : shape(std::move(s)), data(std::move(values)) {
    if (data.size() != NumElements(shape)) {
      throw ShapeError("Tensor", "data length " + std::to_string(data.size()) +
                                     " does not match shape " + ShapeToString(shape));
    }
  }

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t dim(std::size_t i) const { return shape.at(i); }

  // Compares shape and values only.
  bool operator==(const Tensor& o) const { return shape == o.shape && data == o.data; }
};

// Flat registry of named trainable tensors. Names are hierarchical
// ("masknet.repeat0.intrachunk.layer0.attn.wq"); iteration order is the
// lexicographic name order, which fixes every reduction order downstream.
template <typename T>
class ParamRegistry {
 public:
  Tensor<T>& Add(const std::string& name, Shape shape, bool requires_grad = true);
  bool Contains(const std::string& name) const { return entries_.count(name) != 0; }
  Tensor<T>& Get(const std::string& name);
  const Tensor<T>& Get(const std::string& name) const;

  std::size_t TotalCount() const;
  std::size_t CountWithPrefix(const std::string& prefix) const;
  std::size_t size() const { return entries_.size(); }

  std::map<std::string, Tensor<T>>& entries() { return entries_; }
  const std::map<std::string, Tensor<T>>& entries() const { return entries_; }

 private:
  std::map<std::string, Tensor<T>> entries_;
};

// Converts between precisions; used to move trained float parameters into a
// double-precision registry for checks, and vice versa.
template <typename To, typename From>
ParamRegistry<To> CastRegistry(const ParamRegistry<From>& src);

}  // namespace pwsep::ad

#endif  // PWSEP_AD_TENSOR_H_
