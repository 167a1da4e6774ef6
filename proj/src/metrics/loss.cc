// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/metrics/loss.h"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "pwsep/metrics/metrics.h"

namespace pwsep::metrics {
namespace {

struct PairStats {
  double alpha = 0.0;
  double target = 0.0;  // alpha^2 ||c||^2
  double error = 0.0;   // ||est - alpha c||^2, floored
  double sdr = 0.0;
};

template <typename T>
PairStats Pair(const T* est, const T* ref, std::size_t len) {
  double dot = 0.0, rr = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double e = est[i], r = ref[i];
    dot += e * r;
    rr += r * r;
  }
  if (!(rr > 0.0)) throw std::invalid_argument("NegSiSdrPitLoss: reference has zero power");
  PairStats s;
  s.alpha = dot / rr;
  s.target = s.alpha * dot;
  double err = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double d = est[i] - s.alpha * ref[i];
    err += d * d;
  }
  s.error = std::max(err, kLossErrorFloor);
  s.sdr = 10.0 * std::log10(std::max(s.target, kLossErrorFloor) / s.error);
  return s;
}

}  // namespace

template <typename T>
ad::Var<T> NegSiSdrPitLoss(ad::Var<T> est, const std::vector<T>& ref, std::vector<int>* perm_out) {
  if (est.rank() != 3) {
    throw ad::ShapeError("NegSiSdrPitLoss", "expected [J, M, N], got " + ad::ShapeToString(est.shape()));
  }
  if (ref.size() != est.size()) {
    throw ad::ShapeError("NegSiSdrPitLoss", "reference has " + std::to_string(ref.size()) +
                                                " values, estimate " + std::to_string(est.size()));
  }
  const std::size_t j = est.dim(0), len = est.dim(1) * est.dim(2);
  const auto& ev = est.value();
  std::vector<PairStats> stats(j * j);
  Eigen::MatrixXd cost(j, j);
  for (std::size_t r = 0; r < j; ++r) {
    for (std::size_t e = 0; e < j; ++e) {
      stats[r * j + e] = Pair(ev.data() + e * len, ref.data() + r * len, len);
      cost(r, e) = -stats[r * j + e].sdr;
    }
  }
  const std::vector<int> perm = PitPermutation(cost);
  if (perm_out) *perm_out = perm;
  double loss = 0.0;
  for (std::size_t r = 0; r < j; ++r) loss += cost(r, perm[r]);
  loss /= static_cast<double>(j);

  auto& tape = est.tape();
  const int est_id = est.id();
  return tape.Record({}, {static_cast<T>(loss)}, est.requires_grad(),
                     [est_id, ref, perm, stats, j, len](ad::Tape<T>& tp, int self) {
                       const double g = tp.grad(self)[0];
                       const auto& x = tp.value(est_id);
                       auto& gx = tp.grad(est_id);
                       // d(-SDR)/d est = -(10/ln10) (2 alpha c / A - 2 (est - alpha c) / E) / J
                       const double k = -10.0 / std::log(10.0) / static_cast<double>(j) * g;
                       for (std::size_t r = 0; r < j; ++r) {
                         const std::size_t e = static_cast<std::size_t>(perm[r]);
                         const PairStats& s = stats[r * j + e];
                         const T* c = ref.data() + r * len;
                         const T* xe = x.data() + e * len;
                         T* ge = gx.data() + e * len;
                         const double ka = 2.0 * s.alpha / std::max(s.target, kLossErrorFloor);
                         const double ke = 2.0 / s.error;
                         for (std::size_t i = 0; i < len; ++i) {
                           const double resid = xe[i] - s.alpha * c[i];
                           ge[i] += static_cast<T>(k * (ka * c[i] - ke * resid));
                         }
                       }
                     });
}

template ad::Var<float> NegSiSdrPitLoss<float>(ad::Var<float>, const std::vector<float>&, std::vector<int>*);
template ad::Var<double> NegSiSdrPitLoss<double>(ad::Var<double>, const std::vector<double>&, std::vector<int>*);

}  // namespace pwsep::metrics
