// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_METRICS_LOSS_H_
#define PWSEP_METRICS_LOSS_H_

#include <vector>

#include "pwsep/ad/tape.h"

namespace pwsep::metrics {

// Floor on the distortion power inside the loss; only reachable with exact
// reconstructions.
inline constexpr double kLossErrorFloor = 1e-12;

// -mean_j SI-SDR(est[perm[j]], ref[j]) under the best permutation, with one
// common scale per source across all channels. est: [J, M, N] on the tape,
// ref: J*M*N values in the same layout. Accumulates in double. If perm is
// non-null it receives the chosen permutation.
template <typename T>
ad::Var<T> NegSiSdrPitLoss(ad::Var<T> est, const std::vector<T>& ref,
                           std::vector<int>* perm = nullptr);

}  // namespace pwsep::metrics

#endif  // PWSEP_METRICS_LOSS_H_
