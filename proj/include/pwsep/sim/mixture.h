// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_SIM_MIXTURE_H_
#define PWSEP_SIM_MIXTURE_H_

#include <cstdint>
#include <vector>

#include "pwsep/ambi/pwd.h"

namespace pwsep::sim {

struct MixtureExample {
  ambi::AmbisonicSignal mixture;
  std::vector<ambi::AmbisonicSignal> targets;  // reverberant source images
  std::vector<double> gains;
  std::vector<int> source_ids;
  int room_id = -1;
  std::uint64_t seed = 0;
};

// Convolves each source with its RIR, rescales sources 2..J so the omni
// image powers keep the ratios of the dry source powers (gain_1 = 1), trims
// everything to the shortest convolved length (at most max_seconds) and sums.
MixtureExample MakeMixture(const std::vector<Eigen::VectorXd>& speech,
                           const std::vector<ambi::AmbisonicSignal>& rirs,
                           double max_seconds = 5.0);

// Full linear convolution of a mono signal with every channel of `rir`.
Eigen::MatrixXd ConvolveChannels(const Eigen::VectorXd& x, const Eigen::MatrixXd& rir);

struct RirRef {
  int room_id = 0;
  int rir_index = 0;  // within the room
};

struct Association {
  int pair_index = 0;
  int room_id = 0;
  std::vector<int> rir_indices;  // one per source, distinct, same room
};

// Source-pair to RIR association for one epoch: each pair draws a room and
// distinct RIRs within it. Deterministic in (seed, epoch).
std::vector<Association> EpochRemix(const std::vector<int>& rirs_per_room, int num_pairs,
                                    int sources_per_pair, std::uint64_t seed, int epoch);

}  // namespace pwsep::sim

#endif  // PWSEP_SIM_MIXTURE_H_
