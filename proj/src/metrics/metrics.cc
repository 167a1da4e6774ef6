// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pwsep::metrics {
namespace {

void CheckPair(const Signal& est, const Signal& ref, const char* who) {
  if (est.rows() != ref.rows() || est.cols() != ref.cols()) {
    throw std::invalid_argument(std::string(who) + ": estimate and reference shapes differ");
  }
}

double RatioDb(double num, double err) {
  if (err <= kPerfectRatio * num) return kCapDb;
  return std::min(kCapDb, 10.0 * std::log10(num / err));
}

// Hungarian algorithm (shortest augmenting path), rows = references.
std::vector<int> Hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> perm(n);
  for (int j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
  return perm;
}

}  // namespace

double SiSdr(const Signal& est, const Signal& ref, double* alpha) {
  CheckPair(est, ref, "SiSdr");
  const double ref_power = ref.squaredNorm();
  if (!(ref_power > 0.0)) throw std::invalid_argument("SiSdr: reference has zero power");
  const double a = est.cwiseProduct(ref).sum() / ref_power;
  if (alpha) *alpha = a;
  const double target = a * a * ref_power;
  const double err = (est - a * ref).squaredNorm();
  if (!(target > 0.0)) return err > 0.0 ? -kCapDb : kCapDb;
  return std::max(-kCapDb, RatioDb(target, err));
}

std::vector<int> PitPermutation(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols() || cost.rows() == 0) {
    throw std::invalid_argument("PitPermutation: cost matrix must be square and non-empty");
  }
  const int n = static_cast<int>(cost.rows());
  if (n == 1) return {0};
  if (n == 2) {
    return cost(0, 0) + cost(1, 1) <= cost(0, 1) + cost(1, 0) ? std::vector<int>{0, 1}
                                                               : std::vector<int>{1, 0};
  }
  return Hungarian(cost);
}

SiSdrResult MultichannelSiSdr(const std::vector<Signal>& est, const std::vector<Signal>& ref) {
  const std::size_t j = ref.size();
  if (est.size() != j || j == 0) {
    throw std::invalid_argument("MultichannelSiSdr: need the same nonzero number of estimates and references");
  }
  Eigen::MatrixXd sdr(j, j), alpha(j, j);
  for (std::size_t r = 0; r < j; ++r) {
    for (std::size_t e = 0; e < j; ++e) sdr(r, e) = SiSdr(est[e], ref[r], &alpha(r, e));
  }
  SiSdrResult out;
  out.alignment.permutation = PitPermutation(-sdr);
  for (std::size_t r = 0; r < j; ++r) {
    const int e = out.alignment.permutation[r];
    out.per_source.push_back(sdr(r, e));
    out.alignment.alphas.push_back(alpha(r, e));
  }
  out.mean_db = std::accumulate(out.per_source.begin(), out.per_source.end(), 0.0) / j;
  return out;
}

double SiSdrImprovement(const Signal& mixture, const std::vector<Signal>& est,
                        const std::vector<Signal>& ref) {
  double base = 0.0;
  for (const auto& r : ref) base += SiSdr(mixture, r);
  base /= static_cast<double>(ref.size());
  return MultichannelSiSdr(est, ref).mean_db - base;
}

double SiIsr(const Signal& est, const Signal& ref, int taps) {
  CheckPair(est, ref, "SiIsr");
  if (taps < 1) throw std::invalid_argument("SiIsr: taps must be positive");
  if (!(ref.squaredNorm() > 0.0)) throw std::invalid_argument("SiIsr: reference has zero power");
  const Eigen::Index m = ref.rows(), n = ref.cols(), k = taps;

  // Common filter: columns are the stacked (all-channel) reference delayed
  // by d samples; least squares against the stacked estimate.
  Eigen::MatrixXd common(m * n, k);
  common.setZero();
  for (Eigen::Index d = 0; d < k && d < n; ++d) {
    for (Eigen::Index c = 0; c < m; ++c) {
      common.block(c * n + d, d, n - d, 1) = ref.row(c).head(n - d).transpose();
    }
  }
  Eigen::VectorXd est_stacked(m * n);
  for (Eigen::Index c = 0; c < m; ++c) est_stacked.segment(c * n, n) = est.row(c).transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> common_qr(common);
  Eigen::VectorXd h = common_qr.solve(est_stacked);
  const Eigen::VectorXd target = common * h;

  // Spatial projection basis: every reference channel at every delay.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, m * k);
  for (Eigen::Index c = 0; c < m; ++c) {
    for (Eigen::Index d = 0; d < k && d < n; ++d) {
      basis.block(d, c * k + d, n - d, 1) = ref.row(c).head(n - d).transpose();
    }
  }
  Eigen::MatrixXd rhs = est.transpose();
  Eigen::MatrixXd proj;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  if (qr.rank() == basis.cols()) {
    proj = basis * qr.solve(rhs);
  } else {
    // Rank-deficient basis: ridge-regularized normal equations.
    Eigen::MatrixXd gram = basis.transpose() * basis;
    const double ridge = 1e-9 * gram.trace();
    gram.diagonal().array() += ridge;
    proj = basis * gram.ldlt().solve(basis.transpose() * rhs);
  }
  double err = 0.0;
  for (Eigen::Index c = 0; c < m; ++c) {
    err += (proj.col(c) - target.segment(c * n, n)).squaredNorm();
  }
  const double num = target.squaredNorm();
  if (!(num > 0.0)) return -kCapDb;
  return RatioDb(num, err);
}

EvalRecord Evaluate(const Signal& mixture, const std::vector<Signal>& est,
                    const std::vector<Signal>& ref, int taps) {
  EvalRecord rec;
  rec.isr_taps = taps;
  const auto sdr = MultichannelSiSdr(est, ref);
  rec.si_sdr = sdr.mean_db;
  rec.permutation = sdr.alignment.permutation;
  rec.alphas = sdr.alignment.alphas;
  const double j = static_cast<double>(ref.size());
  for (std::size_t r = 0; r < ref.size(); ++r) {
    rec.mixture_si_sdr += SiSdr(mixture, ref[r]) / j;
    rec.si_isr += SiIsr(est[rec.permutation[r]], ref[r], taps) / j;
    rec.mixture_si_isr += SiIsr(mixture, ref[r], taps) / j;
  }
  rec.si_sdri = rec.si_sdr - rec.mixture_si_sdr;
  return rec;
}

MeanStd Summarize(const std::vector<double>& values) {
  MeanStd s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / n);
  return s;
}

}  // namespace pwsep::metrics
