// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/train/optim.h"

#include <cmath>

namespace pwsep::train {

void Adam::Step(ad::ParamRegistry<float>& params, const ad::GradMap<float>& grads, double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
  for (const auto& [name, g] : grads) {
    auto& p = params.Get(name);
    if (!p.requires_grad) continue;
    auto& st = state_[name];
    if (st.m.empty()) {
      st.m.assign(p.size(), 0.0);
      st.v.assign(p.size(), 0.0);
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g.data[i];
      st.m[i] = opts_.beta1 * st.m[i] + (1.0 - opts_.beta1) * gi;
      st.v[i] = opts_.beta2 * st.v[i] + (1.0 - opts_.beta2) * gi * gi;
      const double mhat = st.m[i] / c1;
      const double vhat = st.v[i] / c2;
      p.data[i] = static_cast<float>(p.data[i] - lr * mhat / (std::sqrt(vhat) + opts_.eps));
    }
  }
}

double GlobalNorm(const ad::GradMap<float>& grads) {
  double sq = 0.0;
  for (const auto& [name, g] : grads) {
    for (float v : g.data) sq += static_cast<double>(v) * v;
  }
  return std::sqrt(sq);
}

double ClipGlobalNorm(ad::GradMap<float>& grads, double max_norm) {
  const double norm = GlobalNorm(grads);
  if (norm > max_norm && norm > 0.0) {
    // Float rounding of the scaled values can push the norm up by ~1e-7
    // relative; shave a little so the bound holds after rounding.
    const double scale = max_norm / norm * (1.0 - 1e-6);
    for (auto& [name, g] : grads) {
      for (float& v : g.data) v = static_cast<float>(v * scale);
    }
  }
  return norm;
}

double PlateauScheduler::EndEpoch(int epoch, double val_loss) {
  if (!has_best_ || val_loss < best_) {
    best_ = val_loss;
    has_best_ = true;
    stalled_ = 0;
  } else {
    ++stalled_;
  }
  if (epoch > start_epoch_ && stalled_ >= patience_) {
    lr_ *= factor_;
    stalled_ = 0;
  }
  return lr_;
}

}  // namespace pwsep::train
