// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_AD_GRAD_CHECK_H_
#define PWSEP_AD_GRAD_CHECK_H_

#include <functional>
#include <string>
#include <vector>

#include "pwsep/ad/tape.h"

namespace pwsep::ad {

struct ParamCheck {
  std::string name;
  // max_i |analytic_i - numeric_i| / max(|analytic|_inf, |numeric|_inf,
  //                                      1e-5 * max(1, |loss|))
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  bool finite = true;
  bool pass = false;
};

struct GradCheckReport {
  double step = 0.0;
  double tolerance = 0.0;
  std::vector<ParamCheck> params;

  bool pass() const;
  double worst() const;
  std::string ToString() const;
};

// Builds the scalar loss on a fresh tape from the registry.
using LossGraph = std::function<Var<double>(Tape<double>&, ParamRegistry<double>&)>;

// Compares reverse-mode gradients with central differences for every entry
// with requires_grad set; frozen entries are left out of the report.
GradCheckReport GradCheck(const LossGraph& graph, ParamRegistry<double>& params, double step,
                          double tolerance);

}  // namespace pwsep::ad

#endif  // PWSEP_AD_GRAD_CHECK_H_
