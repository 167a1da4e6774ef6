// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/sim/babble.h"

#include <algorithm>
#include <cmath>

#include "pwsep/util/rng.h"

namespace pwsep::sim {
namespace {

// Two-pole resonator (constant peak gain band-pass).
struct Resonator {
  double b0, b2, a1, a2;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;

  Resonator(double freq, double bw, double fs) {
    const double w0 = 2.0 * M_PI * freq / fs;
    const double q = freq / bw;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    b0 = alpha / a0;
    b2 = -alpha / a0;
    a1 = -2.0 * std::cos(w0) / a0;
    a2 = (1.0 - alpha) / a0;
  }

  double Step(double x) {
    const double y = b0 * x + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    return y;
  }
};

}  // namespace

BabbleVoice RandomVoice(std::uint64_t seed, double sample_rate) {
  Rng rng(seed);
  BabbleVoice v;
  const double nyq = sample_rate / 2.0;
  v.pitch_hz = rng.Uniform(85.0, 260.0);
  v.formants_hz[0] = rng.Uniform(250.0, std::min(900.0, 0.25 * nyq));
  v.formants_hz[1] = rng.Uniform(v.formants_hz[0] + 300.0, std::min(2500.0, 0.6 * nyq));
  v.formants_hz[2] = rng.Uniform(v.formants_hz[1] + 300.0, 0.9 * nyq);
  for (double& bw : v.bandwidths_hz) bw = rng.Uniform(60.0, 200.0);
  v.noise_mix = rng.Uniform(0.1, 0.5);
  return v;
}

Eigen::VectorXd SynthesizeBabble(const BabbleVoice& voice, std::size_t n, double fs,
                                 std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  std::vector<Resonator> bank;
  for (int k = 0; k < 3; ++k) bank.emplace_back(voice.formants_hz[k], voice.bandwidths_hz[k], fs);

  const auto ramp = static_cast<std::size_t>(0.01 * fs);
  std::size_t pos = static_cast<std::size_t>(rng.Uniform(0.0, 0.1) * fs);
  double phase = 0.0;
  while (pos < n) {
    const auto on = static_cast<std::size_t>(rng.Uniform(0.08, 0.3) * fs);
    const auto off = static_cast<std::size_t>(rng.Uniform(0.03, 0.15) * fs);
    // Pitch glides linearly across the syllable.
    const double f_start = voice.pitch_hz * rng.Uniform(0.85, 1.15);
    const double f_end = voice.pitch_hz * rng.Uniform(0.85, 1.15);
    const double level = rng.Uniform(0.5, 1.0);
    for (std::size_t i = 0; i < on && pos + i < n; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(on);
      phase += (f_start + (f_end - f_start) * frac) / fs;
      double excitation = rng.Normal() * voice.noise_mix;
      if (phase >= 1.0) {
        phase -= 1.0;
        excitation += 1.0;
      }
      double y = 0.0;
      for (auto& r : bank) y += r.Step(excitation);
      double env = 1.0;
      if (i < ramp) env = 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(i) / ramp);
      if (on - i <= ramp) env = 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(on - i) / ramp);
      out[static_cast<Eigen::Index>(pos + i)] = level * env * y;
    }
    pos += on + off;
  }
  const double rms = std::sqrt(out.squaredNorm() / std::max<std::size_t>(n, 1));
  if (rms > 0.0) out /= rms;
  return out;
}

}  // namespace pwsep::sim
