// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/ad/tensor.h"

#include <sstream>

namespace pwsep::ad {

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string ShapeToString(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ", ";
    os << shape[i];
  }
  os << ']';
  return os.str();
}

ShapeError::ShapeError(const std::string& op, const std::string& detail)
    : std::invalid_argument(op + ": " + detail), op_(op) {}

template <typename T>
Tensor<T>& ParamRegistry<T>::Add(const std::string& name, Shape shape, bool requires_grad) {
  for (auto d : shape) {
    if (d == 0) throw ShapeError("ParamRegistry::Add", name + " has a zero dimension");
  }
  auto [it, inserted] = entries_.emplace(name, Tensor<T>(std::move(shape)));
  if (!inserted) throw std::invalid_argument("duplicate parameter name: " + name);
  it->second.requires_grad = requires_grad;
  return it->second;
}

template <typename T>
Tensor<T>& ParamRegistry<T>::Get(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("unknown parameter: " + name);
  return it->second;
}

template <typename T>
const Tensor<T>& ParamRegistry<T>::Get(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("unknown parameter: " + name);
  return it->second;
}

template <typename T>
std::size_t ParamRegistry<T>::TotalCount() const {
  std::size_t n = 0;
  for (const auto& [name, t] : entries_) n += t.size();
  return n;
}

template <typename T>
std::size_t ParamRegistry<T>::CountWithPrefix(const std::string& prefix) const {
  std::size_t n = 0;
  for (const auto& [name, t] : entries_) {
    if (name.compare(0, prefix.size(), prefix) == 0) n += t.size();
  }
  return n;
}

template <typename To, typename From>
ParamRegistry<To> CastRegistry(const ParamRegistry<From>& src) {
  ParamRegistry<To> dst;
  for (const auto& [name, t] : src.entries()) {
    auto& d = dst.Add(name, t.shape, t.requires_grad);
    for (std::size_t i = 0; i < t.size(); ++i) d.data[i] = static_cast<To>(t.data[i]);
  }
  return dst;
}

template class ParamRegistry<float>;
template class ParamRegistry<double>;
template ParamRegistry<float> CastRegistry<float, double>(const ParamRegistry<double>&);
template ParamRegistry<double> CastRegistry<double, float>(const ParamRegistry<float>&);
template ParamRegistry<float> CastRegistry<float, float>(const ParamRegistry<float>&);
template ParamRegistry<double> CastRegistry<double, double>(const ParamRegistry<double>&);

}  // namespace pwsep::ad
