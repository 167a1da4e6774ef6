// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/sim/room.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pwsep/util/rng.h"

namespace pwsep::sim {
namespace {

constexpr int kHalfTaps = 8;  // 16-tap interpolator: floor(d)-7 .. floor(d)+8

bool Inside(const RoomSpec& room, const Vec3& p) {
  for (int a = 0; a < 3; ++a) {
    if (!(p[a] > 0.0 && p[a] < room.dims[a])) return false;
  }
  return true;
}

double WallDistance(const RoomSpec& room, const Vec3& p) {
  double d = 1e300;
  for (int a = 0; a < 3; ++a) d = std::min({d, p[a], room.dims[a] - p[a]});
  return d;
}

double Distance(const Vec3& a, const Vec3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

// Adds gain * delta(n - delay) to `out` via windowed sinc.
void AddFractionalImpulse(double delay, double gain, const std::vector<double>& sh,
                          Eigen::MatrixXd& out) {
  const auto len = out.cols();
  const double base = std::floor(delay);
  const double frac = delay - base;
  const auto n0 = static_cast<Eigen::Index>(base);
  if (frac == 0.0) {
    if (n0 >= 0 && n0 < len) {
      for (Eigen::Index c = 0; c < out.rows(); ++c) out(c, n0) += gain * sh[c];
    }
    return;
  }
  for (int k = -kHalfTaps + 1; k <= kHalfTaps; ++k) {
    const Eigen::Index n = n0 + k;
    if (n < 0 || n >= len) continue;
    const double x = k - frac;
    const double sinc = std::sin(M_PI * x) / (M_PI * x);
    const double window = 0.5 * (1.0 + std::cos(M_PI * x / kHalfTaps));
    const double w = gain * sinc * window;
    for (Eigen::Index c = 0; c < out.rows(); ++c) out(c, n) += w * sh[c];
  }
}

}  // namespace

double EyringReflection(const RoomSpec& room) {
  if (!(room.t60 > 0.0)) throw std::invalid_argument("room: t60 must be positive");
  const auto& d = room.dims;
  const double volume = d[0] * d[1] * d[2];
  const double surface = 2.0 * (d[0] * d[1] + d[0] * d[2] + d[1] * d[2]);
  // T60 = 24 ln(10) V / (-c S ln(1 - alpha)),  beta = sqrt(1 - alpha)
  const double log_one_minus_alpha =
      -24.0 * std::log(10.0) * volume / (room.speed_of_sound * surface * room.t60);
  const double beta = std::exp(0.5 * log_one_minus_alpha);
  if (!(beta < 1.0) || !(beta > 0.0)) {
    throw std::invalid_argument("room: t60 " + std::to_string(room.t60) +
                                " gives reflection coefficient outside (0, 1)");
  }
  return beta;
}

std::size_t RirLength(const RoomSpec& room) {
  return static_cast<std::size_t>(std::lround(room.t60 / 2.0 * room.sample_rate));
}

void ValidateGeometry(const RoomSpec& room, const SourcePlacement& src) {
  for (int a = 0; a < 3; ++a) {
    if (!(room.dims[a] > 0.0)) throw std::invalid_argument("room: dimensions must be positive");
  }
  if (!(room.t60 > 0.0)) throw std::invalid_argument("room: t60 must be positive");
  if (!(room.sample_rate > 0.0) || !(room.speed_of_sound > 0.0)) {
    throw std::invalid_argument("room: sample rate and speed of sound must be positive");
  }
  if (room.max_image_order < 0) throw std::invalid_argument("room: negative image order");
  if (!Inside(room, room.array_pos)) throw std::invalid_argument("room: array outside the room");
  if (!Inside(room, src.position)) throw std::invalid_argument("room: source outside the room");
  if (Distance(room.array_pos, src.position) == 0.0) {
    throw std::invalid_argument("room: source coincides with the array");
  }
}

ambi::AmbisonicSignal SimulateRir(const RoomSpec& room, const SourcePlacement& src, int order) {
  return SimulateRir(room, src, order, RirLength(room));
}

ambi::AmbisonicSignal SimulateRir(const RoomSpec& room, const SourcePlacement& src, int order,
                                  std::size_t num_samples) {
  ValidateGeometry(room, src);
  const double beta = EyringReflection(room);
  const int max_order = room.max_image_order;
  const double samples_per_meter = room.sample_rate / room.speed_of_sound;
  const double max_distance = (static_cast<double>(num_samples) + kHalfTaps) / samples_per_meter;

  ambi::AmbisonicSignal rir{Eigen::MatrixXd::Zero(ambi::NumChannels(order),
                                                  static_cast<Eigen::Index>(num_samples)),
                            room.sample_rate};
  // Per-axis image coordinate (1 - 2q) s + 2 m L with |2m - q| reflections.
  struct AxisImage {
    double offset;  // image coordinate minus array coordinate
    int reflections;
  };
  std::array<std::vector<AxisImage>, 3> axes;
  for (int a = 0; a < 3; ++a) {
    const double s = src.position[a], len = room.dims[a], r = room.array_pos[a];
    for (int m = -max_order; m <= max_order; ++m) {
      for (int q = 0; q <= 1; ++q) {
        const int refl = std::abs(2 * m - q);
        if (refl > max_order) continue;
        axes[a].push_back({(1 - 2 * q) * s + 2.0 * m * len - r, refl});
      }
    }
  }
  for (const auto& ix : axes[0]) {
    for (const auto& iy : axes[1]) {
      const int rxy = ix.reflections + iy.reflections;
      if (rxy > max_order) continue;
      for (const auto& iz : axes[2]) {
        const int refl = rxy + iz.reflections;
        if (refl > max_order) continue;
        const double dx = ix.offset, dy = iy.offset, dz = iz.offset;
        const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (r > max_distance) continue;
        const double gain = std::pow(beta, refl) / r;
        const auto sh = ambi::RealShVector(order, ambi::Direction::FromCartesian(dx, dy, dz));
        AddFractionalImpulse(r * samples_per_meter, gain, sh, rir.samples);
      }
    }
  }
  return rir;
}

Scene SampleRoomAndSources(std::uint64_t seed, const SceneOptions& opts) {
  Rng rng(seed);
  Scene scene;
  RoomSpec& room = scene.room;
  room.dims = {rng.Uniform(5.0, 10.0), rng.Uniform(5.0, 10.0), rng.Uniform(3.0, 4.0)};
  room.t60 = rng.Uniform(opts.t60_min, opts.t60_max);
  room.sample_rate = opts.sample_rate;
  room.max_image_order = opts.max_image_order;
  for (int a = 0; a < 3; ++a) room.array_pos[a] = rng.Uniform(1.0, room.dims[a] - 1.0);
  while (static_cast<int>(scene.sources.size()) < opts.num_sources) {
    // Uniform direction, uniform distance in [0.5, 1.5] m; reject near walls.
    const double z = rng.Uniform(-1.0, 1.0);
    const double az = rng.Uniform(0.0, 2.0 * M_PI);
    const double dist = rng.Uniform(0.5, 1.5);
    const double rho = std::sqrt(1.0 - z * z);
    SourcePlacement s;
    s.position = {room.array_pos[0] + dist * rho * std::cos(az),
                  room.array_pos[1] + dist * rho * std::sin(az), room.array_pos[2] + dist * z};
    if (Inside(room, s.position) && WallDistance(room, s.position) >= 0.5) {
      scene.sources.push_back(s);
    }
  }
  return scene;
}

std::vector<double> SchroederDecayDb(const Eigen::VectorXd& rir) {
  const auto n = static_cast<std::size_t>(rir.size());
  std::vector<double> edc(n);
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    acc += rir[static_cast<Eigen::Index>(i)] * rir[static_cast<Eigen::Index>(i)];
    edc[i] = acc;
  }
  const double total = n ? edc[0] : 0.0;
  for (auto& e : edc) e = 10.0 * std::log10(e / total);
  return edc;
}

}  // namespace pwsep::sim
