// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/sim/dataset.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "pwsep/sim/babble.h"
#include "pwsep/util/rng.h"

namespace pwsep::sim {

int NumThreadsFromEnv() {
  const char* env = std::getenv("PWSEP_NUM_THREADS");
  if (!env || !*env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

std::vector<RoomRirs> SimulateRooms(int rooms, int rirs_per_room, SceneOptions opts, int order,
                                    std::uint64_t seed, int first_room_id, int threads) {
  if (rooms < 0 || rirs_per_room < 1) throw std::invalid_argument("SimulateRooms: bad counts");
  opts.num_sources = rirs_per_room;
  std::vector<RoomRirs> out(static_cast<std::size_t>(rooms));
  for (int r = 0; r < rooms; ++r) {
    auto& rr = out[r];
    rr.room_id = first_room_id + r;
    rr.seed = Rng::Derive(seed, static_cast<std::uint64_t>(rr.room_id));
    Scene sc = SampleRoomAndSources(rr.seed, opts);
    rr.room = sc.room;
    rr.sources = std::move(sc.sources);
    rr.rirs.resize(rr.sources.size());
  }
  // Jobs are (room, source) pairs written to fixed slots.
  const std::size_t jobs = static_cast<std::size_t>(rooms) * rirs_per_room;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs; k = next++) {
      auto& rr = out[k / rirs_per_room];
      const std::size_t s = k % rirs_per_room;
      rr.rirs[s] = SimulateRir(rr.room, rr.sources[s], order);
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::vector<Utterance> SynthesizeCorpus(int speakers, int per_speaker, double seconds,
                                        double sample_rate, std::uint64_t seed) {
  std::vector<Utterance> corpus;
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  for (int s = 0; s < speakers; ++s) {
    const auto voice = RandomVoice(Rng::Derive(seed, static_cast<std::uint64_t>(s)), sample_rate);
    for (int u = 0; u < per_speaker; ++u) {
      Utterance utt;
      utt.speaker = s;
      utt.seed = Rng::Derive(seed ^ 0x5eedULL, static_cast<std::uint64_t>(s * per_speaker + u));
      utt.samples = SynthesizeBabble(voice, n, sample_rate, utt.seed);
      corpus.push_back(std::move(utt));
    }
  }
  return corpus;
}

std::vector<SourcePair> MakePairs(const std::vector<Utterance>& corpus, int count,
                                  std::uint64_t seed) {
  bool two_speakers = false;
  for (const auto& u : corpus) two_speakers |= u.speaker != corpus.front().speaker;
  if (!two_speakers) throw std::invalid_argument("MakePairs: need utterances from two speakers");
  Rng rng(seed);
  std::vector<SourcePair> pairs;
  while (static_cast<int>(pairs.size()) < count) {
    const int a = static_cast<int>(rng.Index(corpus.size()));
    const int b = static_cast<int>(rng.Index(corpus.size()));
    if (corpus[a].speaker != corpus[b].speaker) pairs.push_back({a, b});
  }
  return pairs;
}

MixtureExample MixPair(const std::vector<Utterance>& corpus, const SourcePair& pair,
                       const std::vector<RoomRirs>& rooms, const Association& assoc,
                       double max_seconds) {
  const auto it = std::find_if(rooms.begin(), rooms.end(),
                               [&](const RoomRirs& r) { return r.room_id == assoc.room_id; });
  if (it == rooms.end()) throw std::invalid_argument("MixPair: unknown room " + std::to_string(assoc.room_id));
  std::vector<Eigen::VectorXd> speech = {corpus.at(pair.first).samples, corpus.at(pair.second).samples};
  std::vector<ambi::AmbisonicSignal> rirs;
  for (int idx : assoc.rir_indices) rirs.push_back(it->rirs.at(idx));
  auto ex = MakeMixture(speech, rirs, max_seconds);
  ex.source_ids = {pair.first, pair.second};
  ex.room_id = assoc.room_id;
  ex.seed = Rng::Derive(corpus.at(pair.first).seed, corpus.at(pair.second).seed);
  return ex;
}

std::vector<int> RirsPerRoom(const std::vector<RoomRirs>& rooms) {
  std::vector<int> n;
  for (const auto& r : rooms) n.push_back(static_cast<int>(r.rirs.size()));
  return n;
}

std::vector<Association> RemixRooms(const std::vector<RoomRirs>& rooms, int num_pairs,
                                    std::uint64_t seed, int epoch) {
  auto assoc = EpochRemix(RirsPerRoom(rooms), num_pairs, 2, seed, epoch);
  for (auto& a : assoc) a.room_id = rooms.at(a.room_id).room_id;
  return assoc;
}

}  // namespace pwsep::sim
