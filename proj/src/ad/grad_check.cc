// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/ad/grad_check.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pwsep::ad {
namespace {
constexpr double kAbsoluteFloor = 1e-5;
}  // namespace

bool GradCheckReport::pass() const {
  return std::all_of(params.begin(), params.end(), [](const ParamCheck& p) { return p.pass; });
}

double GradCheckReport::worst() const {
  double w = 0.0;
  for (const auto& p : params) {
    w = std::max(w, p.finite ? p.max_rel_error : INFINITY);
  }
  return w;
}

std::string GradCheckReport::ToString() const {
  std::ostringstream os;
  os << "grad check (step " << step << ", tol " << tolerance << ")\n";
  for (const auto& p : params) {
    os << "  " << (p.pass ? "ok  " : "FAIL") << ' ' << p.name << " max_rel=" << p.max_rel_error;
    if (!p.finite) os << " non-finite at index " << p.worst_index;
    os << '\n';
  }
  return os.str();
}

GradCheckReport GradCheck(const LossGraph& graph, ParamRegistry<double>& params, double step,
                          double tolerance) {
  GradCheckReport report;
  report.step = step;
  report.tolerance = tolerance;

  GradMap<double> analytic;
  double loss_scale = 1.0;
  {
    Tape<double> tape;
    auto loss = graph(tape, params);
    loss_scale = std::max(1.0, std::abs(loss.value()[0]));
    analytic = tape.Backward(loss);
  }
  auto eval = [&]() {
    Tape<double> tape;
    return graph(tape, params).value()[0];
  };

  for (auto& [name, tensor] : params.entries()) {
    if (!tensor.requires_grad) continue;
    ParamCheck check;
    check.name = name;
    auto it = analytic.find(name);
    std::vector<double> a(tensor.size(), 0.0);
    if (it != analytic.end()) a.assign(it->second.data.begin(), it->second.data.end());
    std::vector<double> numeric(tensor.size());
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      const double orig = tensor.data[i];
      tensor.data[i] = orig + step;
      const double up = eval();
      tensor.data[i] = orig - step;
      const double down = eval();
      tensor.data[i] = orig;
      numeric[i] = (up - down) / (2.0 * step);
      if (!std::isfinite(numeric[i]) && check.finite) {
        check.finite = false;
        check.worst_index = i;
      }
    }
    if (check.finite) {
      double scale = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        scale = std::max({scale, std::abs(a[i]), std::abs(numeric[i])});
      }
      // Gradients that vanish identically (e.g. key biases under softmax
      // shift invariance) are compared against the finite-difference noise
      // floor instead of their own magnitude.
      scale = std::max(scale, kAbsoluteFloor * loss_scale);
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double rel = std::abs(a[i] - numeric[i]) / scale;
        if (rel > check.max_rel_error) {
          check.max_rel_error = rel;
          check.worst_index = i;
        }
      }
    }
    check.pass = check.finite && check.max_rel_error < tolerance;
    report.params.push_back(check);
  }
  return report;
}

}  // namespace pwsep::ad
