// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_SIM_DATASET_H_
#define PWSEP_SIM_DATASET_H_

#include <cstdint>
#include <vector>

#include "pwsep/sim/mixture.h"
#include "pwsep/sim/room.h"

namespace pwsep::sim {

struct RoomRirs {
  int room_id = 0;
  std::uint64_t seed = 0;
  RoomSpec room;
  std::vector<SourcePlacement> sources;
  std::vector<ambi::AmbisonicSignal> rirs;
};

// Worker count from PWSEP_NUM_THREADS (default 1). Results never depend on it.
int NumThreadsFromEnv();

// Samples `rooms` rooms with `rirs_per_room` source positions each and
// simulates their RIRs. Room r uses seed Derive(seed, first_room_id + r).
std::vector<RoomRirs> SimulateRooms(int rooms, int rirs_per_room, SceneOptions opts, int order,
                                    std::uint64_t seed, int first_room_id = 0, int threads = 1);

struct Utterance {
  int speaker = 0;
  std::uint64_t seed = 0;
  Eigen::VectorXd samples;
};

// Synthetic babble corpus: `speakers` voices with `per_speaker` utterances.
std::vector<Utterance> SynthesizeCorpus(int speakers, int per_speaker, double seconds,
                                        double sample_rate, std::uint64_t seed);

struct SourcePair {
  int first = 0;   // utterance indices
  int second = 0;
};

// Random pairs of utterances from different speakers.
std::vector<SourcePair> MakePairs(const std::vector<Utterance>& corpus, int count,
                                  std::uint64_t seed);

// Mixes one pair in the associated room; the result carries room_id and a
// seed combining the pair index and epoch.
MixtureExample MixPair(const std::vector<Utterance>& corpus, const SourcePair& pair,
                       const std::vector<RoomRirs>& rooms, const Association& assoc,
                       double max_seconds);

std::vector<int> RirsPerRoom(const std::vector<RoomRirs>& rooms);

// EpochRemix over `rooms` with room_id set to the rooms' own ids.
std::vector<Association> RemixRooms(const std::vector<RoomRirs>& rooms, int num_pairs,
                                    std::uint64_t seed, int epoch);

}  // namespace pwsep::sim

#endif  // PWSEP_SIM_DATASET_H_
