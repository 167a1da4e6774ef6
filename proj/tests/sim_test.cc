// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "pwsep/io/wav.h"
#include "pwsep/sim/babble.h"
#include "pwsep/sim/mixture.h"
#include "pwsep/sim/room.h"
#include "pwsep/util/rng.h"

using namespace pwsep;
using namespace pwsep::sim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// 400 m/s at 16 kHz: one meter is exactly 40 samples.
RoomSpec AnechoicRoom() {
  RoomSpec room;
  room.dims = {10.0, 10.0, 10.0};
  room.array_pos = {5.0, 5.0, 5.0};
  room.t60 = 0.4;
  room.sample_rate = 16000.0;
  room.speed_of_sound = 400.0;
  room.max_image_order = 0;
  return room;
}

}  // namespace

TEST_CASE("anechoic RIR is a 1/r plane wave at r/c", "[sim]") {
  const RoomSpec room = AnechoicRoom();
  SourcePlacement src{{6.0, 5.0, 5.0}};
  auto rir = SimulateRir(room, src, 1);
  REQUIRE(rir.channels() == 4);
  REQUIRE(rir.length() == 3200);
  // (W, Y, Z, X) = (1, 0, 0, 1) / 1 m at sample 40.
  CHECK(rir.samples(0, 40) == 1.0);
  CHECK(rir.samples(1, 40) == 0.0);
  CHECK_THAT(rir.samples(2, 40), WithinAbs(0.0, 1e-15));
  CHECK_THAT(rir.samples(3, 40), WithinAbs(1.0, 1e-15));
  CHECK(rir.samples.cwiseAbs().sum() == rir.samples.col(40).cwiseAbs().sum());

  SourcePlacement far{{7.0, 5.0, 5.0}};
  auto rir2 = SimulateRir(room, far, 1);
  CHECK_THAT(rir2.samples(0, 80), WithinAbs(0.5, 1e-15));

  // 1/r law at integer-sample distances along each axis direction.
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int samples = 20 + static_cast<int>(rng.Index(140));
    const double r = samples / 40.0;
    const int axis = static_cast<int>(rng.Index(3));
    const double sign = rng.Uniform() < 0.5 ? -1.0 : 1.0;
    SourcePlacement s{room.array_pos};
    s.position[axis] += sign * r;
    auto h = SimulateRir(room, s, 2);
    CHECK_THAT(h.samples(0, samples), WithinRel(1.0 / r, 1e-9));
    CHECK_THAT(h.samples.row(0).sum(), WithinRel(1.0 / r, 1e-9));
  }
}

TEST_CASE("fractional delays use a 16-tap interpolator", "[sim]") {
  RoomSpec room = AnechoicRoom();
  SourcePlacement s{{6.006, 5.0, 5.0}};
  auto h = SimulateRir(room, s, 0);
  const Eigen::Index peak = 40;
  double mx = 0;
  Eigen::Index arg = 0;
  for (Eigen::Index n = 0; n < h.length(); ++n) {
    if (std::abs(h.samples(0, n)) > mx) {
      mx = std::abs(h.samples(0, n));
      arg = n;
    }
  }
  CHECK(arg == peak);
  CHECK((h.samples.row(0).array() != 0.0).count() == 16);
}

TEST_CASE("RIR length is t60/2", "[sim]") {
  RoomSpec room;
  room.t60 = 0.3;
  room.sample_rate = 16000;
  CHECK(RirLength(room) == 2400);
  room.max_image_order = 2;
  CHECK(SimulateRir(room, SourcePlacement{{4.0, 2.5, 1.5}}, 1).length() == 2400);
}

TEST_CASE("Eyring reflection coefficient reproduces t60", "[sim]") {
  RoomSpec room;
  room.dims = {7.0, 6.0, 3.2};
  for (double t60 : {0.2, 0.35, 0.5, 1.2}) {
    room.t60 = t60;
    const double beta = EyringReflection(room);
    REQUIRE(beta > 0.0);
    REQUIRE(beta < 1.0);
    const double alpha = 1.0 - beta * beta;
    const double v = 7.0 * 6.0 * 3.2, s = 2.0 * (7.0 * 6.0 + 7.0 * 3.2 + 6.0 * 3.2);
    // Invert: T60 = 24 ln(10) V / (c S (-ln(1 - alpha))).
    const double t60_back = 24.0 * std::log(10.0) * v / (343.0 * s * -std::log(1.0 - alpha));
    CHECK_THAT(t60_back, WithinRel(t60, 1e-12));
  }
  room.t60 = 0.0;
  CHECK_THROWS_AS(EyringReflection(room), std::invalid_argument);
}

TEST_CASE("Schroeder decay of a t60 = 0.5 s room", "[sim]") {
  RoomSpec room;
  room.dims = {7.0, 6.0, 3.5};
  room.array_pos = {3.2, 2.9, 1.6};
  room.t60 = 0.5;
  room.max_image_order = 20;
  SourcePlacement s{{4.1, 3.4, 1.4}};
  auto rir = SimulateRir(room, s, 1, static_cast<std::size_t>(room.t60 * room.sample_rate));
  auto edc = SchroederDecayDb(rir.samples.row(0).transpose());
  for (std::size_t i = 1; i < edc.size(); ++i) REQUIRE(edc[i] <= edc[i - 1]);
  CHECK(edc[RirLength(room)] <= -20.0);
}

TEST_CASE("geometry errors", "[sim]") {
  RoomSpec room = AnechoicRoom();
  CHECK_THROWS_AS(SimulateRir(room, SourcePlacement{{11.0, 5.0, 5.0}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(SimulateRir(room, SourcePlacement{room.array_pos}, 1), std::invalid_argument);
  room.array_pos = {-1.0, 1.0, 1.0};
  CHECK_THROWS_AS(SimulateRir(room, SourcePlacement{{1.0, 1.0, 1.0}}, 1), std::invalid_argument);
  room = AnechoicRoom();
  room.t60 = -0.1;
  CHECK_THROWS_AS(SimulateRir(room, SourcePlacement{{1.0, 1.0, 1.0}}, 1), std::invalid_argument);
}

TEST_CASE("scene sampling constraints", "[sim]") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Scene sc = SampleRoomAndSources(seed);
    const auto& r = sc.room;
    REQUIRE(r.dims[0] >= 5.0);
    REQUIRE(r.dims[0] <= 10.0);
    REQUIRE(r.dims[1] >= 5.0);
    REQUIRE(r.dims[1] <= 10.0);
    REQUIRE(r.dims[2] >= 3.0);
    REQUIRE(r.dims[2] <= 4.0);
    REQUIRE(r.t60 >= 0.2);
    REQUIRE(r.t60 <= 0.5);
    for (int a = 0; a < 3; ++a) {
      REQUIRE(r.array_pos[a] >= 1.0);
      REQUIRE(r.dims[a] - r.array_pos[a] >= 1.0);
    }
    REQUIRE(sc.sources.size() == 2);
    for (const auto& s : sc.sources) {
      double d2 = 0;
      for (int a = 0; a < 3; ++a) {
        d2 += (s.position[a] - r.array_pos[a]) * (s.position[a] - r.array_pos[a]);
        REQUIRE(s.position[a] >= 0.5);
        REQUIRE(r.dims[a] - s.position[a] >= 0.5);
      }
      REQUIRE(std::sqrt(d2) >= 0.5);
      REQUIRE(std::sqrt(d2) <= 1.5);
    }
  }
  const Scene a = SampleRoomAndSources(17), b = SampleRoomAndSources(17);
  CHECK(a.room.dims == b.room.dims);
  CHECK(a.room.t60 == b.room.t60);
  CHECK(a.sources[1].position == b.sources[1].position);
}

TEST_CASE("mixture construction", "[sim]") {
  const double fs = 8000;
  auto impulse = [&](double amp, int delay) {
    ambi::AmbisonicSignal r{Eigen::MatrixXd::Zero(4, 50), fs};
    r.samples(0, delay) = amp;
    r.samples(3, delay) = 0.5 * amp;
    return r;
  };
  Rng rng(9);
  Eigen::VectorXd s1(400), s2(400);
  for (int i = 0; i < 400; ++i) {
    s1[i] = rng.Normal();
    s2[i] = rng.Normal();
  }
  s1 *= 1.0 / std::sqrt(s1.squaredNorm() / 400);  // power 1
  s2 *= 2.0 / std::sqrt(s2.squaredNorm() / 400);  // power 4

  SECTION("identical powers and RIRs give unit gains and mixture = 2 target") {
    auto ex = MakeMixture({s1, s1}, {impulse(1.0, 0), impulse(1.0, 0)});
    CHECK(ex.gains[1] == 1.0);
    CHECK((ex.mixture.samples - 2.0 * ex.targets[0].samples).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("power ratio is restored") {
    // Omni image powers: 1 * 2 = 2 and 4 * 0.5 = 2 over the untruncated signal.
    auto ex = MakeMixture({s1, s2}, {impulse(std::sqrt(2.0), 0), impulse(std::sqrt(0.5), 0)});
    // Solve g^2 * P2 / P1 = 4 / 1 with image powers P1 = P2.
    CHECK_THAT(ex.gains[1], WithinRel(2.0, 1e-12));
    const double p1 = ex.targets[0].samples.row(0).squaredNorm();
    const double p2 = ex.targets[1].samples.row(0).squaredNorm();
    CHECK_THAT(p2 / p1, WithinRel(4.0, 1e-9));
  }
  SECTION("random rooms: additivity and ratio matching") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      Scene sc = SampleRoomAndSources(seed, {0.2, 0.3, fs, 4, 2});
      std::vector<ambi::AmbisonicSignal> rirs;
      for (const auto& s : sc.sources) rirs.push_back(SimulateRir(sc.room, s, 1));
      Eigen::VectorXd a = SynthesizeBabble(RandomVoice(seed, fs), 4000, fs, 1);
      Eigen::VectorXd b = 0.3 * SynthesizeBabble(RandomVoice(seed + 100, fs), 3000, fs, 2);
      auto ex = MakeMixture({a, b}, rirs);
      CHECK(ex.mixture.length() == 3000 + rirs[1].length() - 1);
      Eigen::MatrixXd sum = ex.targets[0].samples + ex.targets[1].samples;
      CHECK((ex.mixture.samples - sum).cwiseAbs().maxCoeff() == 0.0);
      const double ratio = ex.targets[1].samples.row(0).squaredNorm() /
                           ex.targets[0].samples.row(0).squaredNorm();
      CHECK_THAT(ratio, WithinRel((b.squaredNorm() / 3000) / (a.squaredNorm() / 4000), 1e-9));
    }
  }
  SECTION("cap at max_seconds") {
    auto ex = MakeMixture({s1, s2}, {impulse(1.0, 3), impulse(1.0, 5)}, 0.01);
    CHECK(ex.mixture.length() == 80);
  }
  SECTION("errors") {
    Eigen::VectorXd silent = Eigen::VectorXd::Zero(400);
    CHECK_THROWS_AS(MakeMixture({s1, silent}, {impulse(1, 0), impulse(1, 0)}), std::invalid_argument);
    CHECK_THROWS_AS(MakeMixture({s1}, {impulse(1, 0)}), std::invalid_argument);
    auto other = impulse(1, 0);
    other.sample_rate = 16000;
    CHECK_THROWS_AS(MakeMixture({s1, s2}, {impulse(1, 0), other}), std::invalid_argument);
  }
}

TEST_CASE("epoch remix", "[sim]") {
  const std::vector<int> per_room = {5, 1, 7, 4};
  auto e1 = EpochRemix(per_room, 40, 2, 11, 1);
  auto e1b = EpochRemix(per_room, 40, 2, 11, 1);
  auto e2 = EpochRemix(per_room, 40, 2, 11, 2);
  bool differ = false;
  for (int p = 0; p < 40; ++p) {
    CHECK(e1[p].room_id == e1b[p].room_id);
    CHECK(e1[p].rir_indices == e1b[p].rir_indices);
    if (e1[p].room_id != e2[p].room_id || e1[p].rir_indices != e2[p].rir_indices) differ = true;
    for (const auto* e : {&e1[p], &e2[p]}) {
      REQUIRE(e->rir_indices.size() == 2);
      CHECK(e->room_id != 1);
      CHECK(e->rir_indices[0] != e->rir_indices[1]);
      for (int i : e->rir_indices) CHECK(i < per_room[e->room_id]);
    }
  }
  CHECK(differ);
  CHECK_THROWS_AS(EpochRemix({1, 1}, 3, 2, 0, 0), std::invalid_argument);
}

TEST_CASE("babble generator", "[sim]") {
  const auto v = RandomVoice(3, 8000);
  auto a = SynthesizeBabble(v, 8000, 8000, 1);
  auto b = SynthesizeBabble(v, 8000, 8000, 1);
  auto c = SynthesizeBabble(RandomVoice(4, 8000), 8000, 8000, 1);
  CHECK(a == b);
  CHECK(a != c);
  CHECK_THAT(a.squaredNorm() / 8000, WithinRel(1.0, 1e-12));
  CHECK(a.allFinite());
  // Bursty: a noticeable fraction of exact silence between syllables.
  CHECK((a.array() == 0.0).count() > 400);
}

TEST_CASE("wav round trip", "[io]") {
  const auto dir = std::filesystem::temp_directory_path() / "pwsep_wav_test";
  std::filesystem::create_directories(dir);
  io::WavData w;
  w.sample_rate = 8000;
  w.samples = Eigen::MatrixXd::Random(4, 321).cast<float>().cast<double>();
  const std::string path = (dir / "x.wav").string();
  io::WriteWav(path, w);
  auto r = io::ReadWav(path);
  CHECK(r.sample_rate == 8000);
  CHECK(r.samples == w.samples);

  // Hand-assembled 16-bit PCM mono file.
  const std::string pcm = (dir / "pcm.wav").string();
  {
    std::ofstream f(pcm, std::ios::binary);
    auto u32 = [&](std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
    auto u16 = [&](std::uint16_t v) { f.write(reinterpret_cast<const char*>(&v), 2); };
    f.write("RIFF", 4);
    u32(36 + 4);
    f.write("WAVEfmt ", 8);
    u32(16);
    u16(1);
    u16(1);
    u32(16000);
    u32(32000);
    u16(2);
    u16(16);
    f.write("data", 4);
    u32(4);
    u16(16384);
    u16(static_cast<std::uint16_t>(-32768));
  }
  auto p = io::ReadWav(pcm);
  REQUIRE(p.samples.cols() == 2);
  CHECK(p.samples(0, 0) == 0.5);
  CHECK(p.samples(0, 1) == -1.0);
  CHECK_THROWS_AS(io::ReadWav((dir / "missing.wav").string()), std::runtime_error);
  std::filesystem::remove_all(dir);
}
