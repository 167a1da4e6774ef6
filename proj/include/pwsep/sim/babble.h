// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_SIM_BABBLE_H_
#define PWSEP_SIM_BABBLE_H_

#include <Eigen/Dense>
#include <cstdint>

namespace pwsep::sim {

// Synthetic "speaker": a glottal-like pulse train plus breath noise shaped by
// three resonances, gated into syllable-length bursts.
struct BabbleVoice {
  double pitch_hz = 120.0;
  double formants_hz[3] = {500.0, 1500.0, 2500.0};
  double bandwidths_hz[3] = {80.0, 120.0, 160.0};
  double noise_mix = 0.3;
};

BabbleVoice RandomVoice(std::uint64_t seed, double sample_rate);

// Unit-RMS signal of n samples. Deterministic per (voice, seed).
Eigen::VectorXd SynthesizeBabble(const BabbleVoice& voice, std::size_t n, double sample_rate,
                                 std::uint64_t seed);

}  // namespace pwsep::sim

#endif  // PWSEP_SIM_BABBLE_H_
