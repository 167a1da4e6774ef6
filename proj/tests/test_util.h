// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_TESTS_TEST_UTIL_H_
#define PWSEP_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <vector>

#include "pwsep/ad/tensor.h"
#include "pwsep/util/rng.h"

namespace pwsep::testing {

// Element-wise equality across containers with different allocators.
template <typename A, typename B>
bool SameValues(const A& a, const B& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

inline std::vector<double> RandomVector(Rng& rng, std::size_t n, double lo = -1.0,
                                        double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.Uniform(lo, hi);
  return v;
}

inline ad::Tensor<double>& AddRandom(ad::ParamRegistry<double>& reg, const std::string& name,
                                     ad::Shape shape, Rng& rng, double lo = -1.0,
                                     double hi = 1.0) {
  auto& t = reg.Add(name, std::move(shape));
  for (auto& x : t.data) x = rng.Uniform(lo, hi);
  return t;
}

inline void Randomize(ad::ParamRegistry<double>& reg, Rng& rng, double lo = -0.5,
                      double hi = 0.5) {
  for (auto& [name, t] : reg.entries()) {
    for (auto& x : t.data) x = rng.Uniform(lo, hi);
  }
}

}  // namespace pwsep::testing

#endif  // PWSEP_TESTS_TEST_UTIL_H_
