// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/sim/mixture.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pwsep/util/rng.h"

namespace pwsep::sim {

Eigen::MatrixXd ConvolveChannels(const Eigen::VectorXd& x, const Eigen::MatrixXd& rir) {
  const Eigen::Index n = x.size(), k = rir.cols();
  if (n == 0 || k == 0) return Eigen::MatrixXd::Zero(rir.rows(), 0);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rir.rows(), n + k - 1);
  for (Eigen::Index c = 0; c < rir.rows(); ++c) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double h = rir(c, j);
      if (h == 0.0) continue;
      out.row(c).segment(j, n) += h * x.transpose();
    }
  }
  return out;
}

MixtureExample MakeMixture(const std::vector<Eigen::VectorXd>& speech,
                           const std::vector<ambi::AmbisonicSignal>& rirs, double max_seconds) {
  const std::size_t j_count = speech.size();
  if (j_count < 2) throw std::invalid_argument("MakeMixture: need at least two sources");
  if (rirs.size() != j_count) throw std::invalid_argument("MakeMixture: one RIR per source");
  const double fs = rirs[0].sample_rate;
  for (const auto& r : rirs) {
    if (r.sample_rate != fs) throw std::invalid_argument("MakeMixture: sample rates differ");
    if (r.channels() != rirs[0].channels()) {
      throw std::invalid_argument("MakeMixture: RIR channel counts differ");
    }
  }
  std::vector<double> dry_power(j_count);
  Eigen::Index length = static_cast<Eigen::Index>(std::llround(max_seconds * fs));
  for (std::size_t j = 0; j < j_count; ++j) {
    if (speech[j].size() == 0) throw std::invalid_argument("MakeMixture: empty source");
    dry_power[j] = speech[j].squaredNorm() / static_cast<double>(speech[j].size());
    if (!(dry_power[j] > 0.0)) {
      throw std::invalid_argument("MakeMixture: source " + std::to_string(j) + " is silent");
    }
    length = std::min(length, speech[j].size() + rirs[j].length() - 1);
  }

  MixtureExample ex;
  std::vector<double> image_power(j_count);
  for (std::size_t j = 0; j < j_count; ++j) {
    Eigen::MatrixXd img = ConvolveChannels(speech[j], rirs[j].samples).leftCols(length);
    image_power[j] = img.row(0).squaredNorm() / static_cast<double>(length);
    if (!(image_power[j] > 0.0)) {
      throw std::invalid_argument("MakeMixture: source image " + std::to_string(j) + " is silent");
    }
    ex.targets.push_back({std::move(img), fs});
  }
  ex.gains.resize(j_count);
  for (std::size_t j = 0; j < j_count; ++j) {
    ex.gains[j] = j == 0 ? 1.0
                         : std::sqrt(dry_power[j] * image_power[0] /
                                     (dry_power[0] * image_power[j]));
    ex.targets[j].samples *= ex.gains[j];
  }
  ex.mixture = {Eigen::MatrixXd::Zero(ex.targets[0].channels(), length), fs};
  for (const auto& t : ex.targets) ex.mixture.samples += t.samples;
  ex.source_ids.resize(j_count);
  std::iota(ex.source_ids.begin(), ex.source_ids.end(), 0);
  return ex;
}

std::vector<Association> EpochRemix(const std::vector<int>& rirs_per_room, int num_pairs,
                                    int sources_per_pair, std::uint64_t seed, int epoch) {
  std::vector<int> eligible;
  for (std::size_t r = 0; r < rirs_per_room.size(); ++r) {
    if (rirs_per_room[r] >= sources_per_pair) eligible.push_back(static_cast<int>(r));
  }
  if (eligible.empty()) {
    throw std::invalid_argument("EpochRemix: no room has " + std::to_string(sources_per_pair) +
                                " RIRs");
  }
  Rng rng(Rng::Derive(seed, static_cast<std::uint64_t>(epoch)));
  std::vector<Association> out;
  out.reserve(static_cast<std::size_t>(num_pairs));
  for (int p = 0; p < num_pairs; ++p) {
    Association a;
    a.pair_index = p;
    a.room_id = eligible[rng.Index(eligible.size())];
    std::vector<int> idx(static_cast<std::size_t>(rirs_per_room[a.room_id]));
    std::iota(idx.begin(), idx.end(), 0);
    rng.Shuffle(idx.begin(), idx.end());
    a.rir_indices.assign(idx.begin(), idx.begin() + sources_per_pair);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace pwsep::sim
