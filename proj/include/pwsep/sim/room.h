// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_SIM_ROOM_H_
#define PWSEP_SIM_ROOM_H_

#include <array>
#include <cstdint>
#include <vector>

#include "pwsep/ambi/pwd.h"

namespace pwsep::sim {

using Vec3 = std::array<double, 3>;

struct RoomSpec {
  Vec3 dims{6.0, 5.0, 3.0};  // meters
  double t60 = 0.3;          // seconds
  Vec3 array_pos{3.0, 2.5, 1.5};
  double sample_rate = 16000.0;
  double speed_of_sound = 343.0;
  int max_image_order = 10;
};

struct SourcePlacement {
  Vec3 position{};
};

// Frequency-independent wall reflection coefficient from Eyring's formula.
double EyringReflection(const RoomSpec& room);

// Image-source Ambisonic RIR truncated to round(t60 / 2 * fs) samples. Each
// image contributes beta^reflections / r at delay r / c, interpolated with a
// 16-tap Hann-windowed sinc and encoded as a plane wave from its direction.
ambi::AmbisonicSignal SimulateRir(const RoomSpec& room, const SourcePlacement& src, int order);

// Same, with an explicit output length.
ambi::AmbisonicSignal SimulateRir(const RoomSpec& room, const SourcePlacement& src, int order,
                                  std::size_t num_samples);

std::size_t RirLength(const RoomSpec& room);

// Throws std::invalid_argument if the room, array or source violates basic
// geometry (non-positive dims, points outside the room, t60 <= 0).
void ValidateGeometry(const RoomSpec& room, const SourcePlacement& src);

struct SceneOptions {
  double t60_min = 0.2;
  double t60_max = 0.5;
  double sample_rate = 16000.0;
  int max_image_order = 10;
  int num_sources = 2;
};

struct Scene {
  RoomSpec room;
  std::vector<SourcePlacement> sources;
};

// Lx, Ly in [5, 10] m, Lz in [3, 4] m, array >= 1 m from every wall, sources
// at 0.5-1.5 m from the array and >= 0.5 m from every wall. Rejection
// sampling; deterministic per seed.
Scene SampleRoomAndSources(std::uint64_t seed, const SceneOptions& opts = {});

// Energy decay curve in dB (Schroeder backward integration), normalized to
// 0 dB at n = 0.
std::vector<double> SchroederDecayDb(const Eigen::VectorXd& rir);

}  // namespace pwsep::sim

#endif  // PWSEP_SIM_ROOM_H_
