// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_TRAIN_OPTIM_H_
#define PWSEP_TRAIN_OPTIM_H_

#include <map>
#include <string>
#include <vector>

#include "pwsep/ad/tape.h"

namespace pwsep::train {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction; moments are kept per parameter name. Entries
// without a gradient in `grads` are left untouched.
class Adam {
 public:
  explicit Adam(AdamOptions opts = {}) : opts_(opts) {}

  void Step(ad::ParamRegistry<float>& params, const ad::GradMap<float>& grads, double lr);
  long steps() const { return t_; }

 private:
  struct Moments {
    std::vector<double> m, v;
  };
  AdamOptions opts_;
  long t_ = 0;
  std::map<std::string, Moments> state_;
};

// Global 2-norm over all gradients.
double GlobalNorm(const ad::GradMap<float>& grads);

// Rescales all gradients so the global norm is at most max_norm; returns the
// norm before clipping.
double ClipGlobalNorm(ad::GradMap<float>& grads, double max_norm);

// Halves (by `factor`) once the epoch number exceeds `start_epoch` and the
// validation loss has not strictly decreased for `patience` epochs.
class PlateauScheduler {
 public:
  PlateauScheduler(double lr, double factor, int patience, int start_epoch)
      : lr_(lr), factor_(factor), patience_(patience), start_epoch_(start_epoch) {}

  // Call once per finished epoch (1-based); returns the learning rate for
  // the next epoch.
  double EndEpoch(int epoch, double val_loss);
  double lr() const { return lr_; }

 private:
  double lr_;
  double factor_;
  int patience_;
  int start_epoch_;
  double best_ = 0.0;
  bool has_best_ = false;
  int stalled_ = 0;
};

}  // namespace pwsep::train

#endif  // PWSEP_TRAIN_OPTIM_H_
