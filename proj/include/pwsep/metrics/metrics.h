// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_METRICS_METRICS_H_
#define PWSEP_METRICS_METRICS_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace pwsep::metrics {

// Reported in place of +inf for (numerically) perfect reconstructions.
inline constexpr double kCapDb = 300.0;
// Errors below this fraction of the signal power (200 dB) are beyond what
// double-precision least squares can resolve and count as perfect.
inline constexpr double kPerfectRatio = 1e-20;
inline constexpr int kDefaultIsrTaps = 32;

// Multichannel signals are channels x samples.
using Signal = Eigen::MatrixXd;

// One common scale over all channels: alpha = <est, ref> / ||ref||^2 and
// 10 log10(||alpha ref||^2 / ||est - alpha ref||^2). Throws on a silent
// reference or mismatched shapes.
double SiSdr(const Signal& est, const Signal& ref, double* alpha = nullptr);

// Minimum-cost assignment. Returns perm with perm[j] = estimate index for
// reference j. Exhaustive for J <= 2, Hungarian otherwise.
std::vector<int> PitPermutation(const Eigen::MatrixXd& cost);

struct ScaledAlignment {
  std::vector<int> permutation;
  std::vector<double> alphas;
};

struct SiSdrResult {
  double mean_db = 0.0;
  std::vector<double> per_source;  // indexed by reference
  ScaledAlignment alignment;
};

// Best-permutation (uPIT) multichannel SI-SDR.
SiSdrResult MultichannelSiSdr(const std::vector<Signal>& est, const std::vector<Signal>& ref);

// SI-SDR(estimates) - SI-SDR(mixture copies); mean over sources.
double SiSdrImprovement(const Signal& mixture, const std::vector<Signal>& est,
                        const std::vector<Signal>& ref);

// Scale-invariant image-to-spatial distortion ratio for one aligned pair.
// The target is the best common (all-channel) K-tap filtering of ref fitted
// to est; est is projected per channel onto the span of every ref channel
// delayed by 0..K-1 samples; the ratio is ||target||^2 / ||P est - target||^2.
double SiIsr(const Signal& est, const Signal& ref, int taps = kDefaultIsrTaps);

struct EvalRecord {
  double si_sdr = 0.0;
  double si_sdri = 0.0;
  double si_isr = 0.0;
  double mixture_si_sdr = 0.0;
  double mixture_si_isr = 0.0;
  std::vector<int> permutation;
  std::vector<double> alphas;
  int isr_taps = kDefaultIsrTaps;
};

EvalRecord Evaluate(const Signal& mixture, const std::vector<Signal>& est,
                    const std::vector<Signal>& ref, int taps = kDefaultIsrTaps);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};
MeanStd Summarize(const std::vector<double>& values);

}  // namespace pwsep::metrics

#endif  // PWSEP_METRICS_METRICS_H_
