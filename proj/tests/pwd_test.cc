// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "pwsep/ambi/pwd.h"
#include "pwsep/util/rng.h"

using namespace pwsep;
using namespace pwsep::ambi;
using Catch::Matchers::WithinAbs;

namespace {

Eigen::MatrixXd RandomMatrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.Normal();
  return m;
}

}  // namespace

TEST_CASE("real spherical harmonics, SN3D without Condon-Shortley phase", "[ambi]") {
  CHECK(RealSh(0, 0, Direction{1.3, -0.4}) == 1.0);
  CHECK_THAT(RealSh(1, 0, Direction{0.7, M_PI / 2}), WithinAbs(1.0, 1e-15));
  CHECK_THAT(RealSh(1, 1, Direction{0.0, 0.0}), WithinAbs(1.0, 1e-15));
  CHECK_THROWS_AS(RealSh(1, 2, Direction{}), std::invalid_argument);

  // Closed forms for orders 1-3 (AmbiX reference table).
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const Direction d = Direction::Make(rng.Uniform(0, 2 * M_PI), rng.Uniform(-M_PI / 2, M_PI / 2));
    const double a = d.azimuth, e = d.elevation;
    const double ce = std::cos(e), se = std::sin(e);
    const double r3 = std::sqrt(3.0);
    CHECK_THAT(RealSh(1, -1, d), WithinAbs(std::sin(a) * ce, 1e-14));
    CHECK_THAT(RealSh(1, 0, d), WithinAbs(se, 1e-14));
    CHECK_THAT(RealSh(1, 1, d), WithinAbs(std::cos(a) * ce, 1e-14));
    CHECK_THAT(RealSh(2, -2, d), WithinAbs(r3 / 2 * std::sin(2 * a) * ce * ce, 1e-14));
    CHECK_THAT(RealSh(2, -1, d), WithinAbs(r3 / 2 * std::sin(a) * std::sin(2 * e), 1e-14));
    CHECK_THAT(RealSh(2, 0, d), WithinAbs(0.5 * (3 * se * se - 1), 1e-14));
    CHECK_THAT(RealSh(2, 1, d), WithinAbs(r3 / 2 * std::cos(a) * std::sin(2 * e), 1e-14));
    CHECK_THAT(RealSh(2, 2, d), WithinAbs(r3 / 2 * std::cos(2 * a) * ce * ce, 1e-14));
    CHECK_THAT(RealSh(3, 0, d), WithinAbs(0.5 * se * (5 * se * se - 3), 1e-14));
    CHECK_THAT(RealSh(3, 3, d), WithinAbs(std::sqrt(5.0 / 8.0) * std::cos(3 * a) * ce * ce * ce, 1e-14));
    CHECK_THAT(RealSh(3, -3, d), WithinAbs(std::sqrt(5.0 / 8.0) * std::sin(3 * a) * ce * ce * ce, 1e-14));
  }
}

TEST_CASE("default grids", "[ambi]") {
  auto g0 = DefaultGrid(0);
  REQUIRE(g0.size() == 1);
  CHECK(g0[0].azimuth == 0.0);
  CHECK(g0[0].elevation == 0.0);

  auto g1 = DefaultGrid(1);
  REQUIRE(g1.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      double xi, yi, zi, xj, yj, zj;
      g1[i].ToCartesian(xi, yi, zi);
      g1[j].ToCartesian(xj, yj, zj);
      CHECK_THAT(xi * xj + yi * yj + zi * zj, WithinAbs(-1.0 / 3.0, 1e-14));
    }
  }
  for (int order = 0; order <= 3; ++order) {
    auto m = BuildPwdMatrix(order, DefaultGrid(order));
    INFO("order " << order);
    CHECK(m.num_directions() == NumChannels(order));
    CHECK(m.ConditionNumber() < 10.0);
    for (const auto& d : m.directions) {
      CHECK(d.azimuth >= 0.0);
      CHECK(d.azimuth < 2 * M_PI);
    }
  }
}

TEST_CASE("pwd matrix entries", "[ambi]") {
  auto m0 = BuildPwdMatrix(0, DefaultGrid(0));
  CHECK(m0.encoder(0, 0) == 1.0);
  CHECK_THAT(m0.decoder(0, 0), WithinAbs(1.0, 1e-15));

  std::vector<Direction> dirs = DefaultGrid(1);
  dirs[0] = Direction{0.0, 0.0};
  auto m1 = BuildPwdMatrix(1, dirs);
  CHECK_THAT(m1.encoder(0, 0), WithinAbs(1.0, 1e-15));
  CHECK_THAT(m1.encoder(0, 1), WithinAbs(0.0, 1e-15));
  CHECK_THAT(m1.encoder(0, 2), WithinAbs(0.0, 1e-15));
  CHECK_THAT(m1.encoder(0, 3), WithinAbs(std::sqrt(3.0), 1e-15));

  auto tetra = BuildPwdMatrix(1, DefaultGrid(1));
  CHECK((tetra.decoder * tetra.encoder - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

  std::vector<Direction> degenerate(4, Direction{0.3, 0.2});
  CHECK_THROWS_AS(BuildPwdMatrix(1, degenerate), std::invalid_argument);
  CHECK_THROWS_AS(BuildPwdMatrix(1, DefaultGrid(0)), std::invalid_argument);
}

TEST_CASE("pwd encode and decode", "[ambi]") {
  auto m = BuildPwdMatrix(1, DefaultGrid(1));
  SECTION("zero in, zero out") {
    AmbisonicSignal x{Eigen::MatrixXd::Zero(4, 32), 16000};
    CHECK(PwdEncode(x, m).samples.isZero(0.0));
    CHECK(PwdDecode(PwdEncode(x, m), m).samples.isZero(0.0));
  }
  SECTION("omni impulse gives unit impulse in every direction") {
    AmbisonicSignal x{Eigen::MatrixXd::Zero(4, 8), 16000};
    x.samples(0, 3) = 1.0;
    auto p = PwdEncode(x, m);
    for (int q = 0; q < 4; ++q) {
      for (int n = 0; n < 8; ++n) CHECK_THAT(p.samples(q, n), WithinAbs(n == 3 ? 1.0 : 0.0, 1e-15));
    }
  }
  SECTION("round trip on random signals") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
      AmbisonicSignal x{RandomMatrix(rng, 4, 64), 16000};
      auto back = PwdDecode(PwdEncode(x, m), m);
      CHECK((back.samples - x.samples).norm() / x.samples.norm() < 1e-10);
    }
    for (int order = 2; order <= 3; ++order) {
      auto mo = BuildPwdMatrix(order, DefaultGrid(order));
      AmbisonicSignal x{RandomMatrix(rng, NumChannels(order), 64), 16000};
      CHECK((PwdDecode(PwdEncode(x, mo), mo).samples - x.samples).norm() / x.samples.norm() < 1e-10);
    }
  }
  SECTION("linearity") {
    Rng rng(3);
    AmbisonicSignal x{RandomMatrix(rng, 4, 16), 16000}, y{RandomMatrix(rng, 4, 16), 16000};
    AmbisonicSignal z{2.5 * x.samples - 0.75 * y.samples, 16000};
    auto lhs = PwdEncode(z, m).samples;
    auto rhs = 2.5 * PwdEncode(x, m).samples - 0.75 * PwdEncode(y, m).samples;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
  }
  SECTION("plane wave from a grid direction peaks in that channel") {
    for (int q = 0; q < 4; ++q) {
      auto sh = RealShVector(1, m.directions[q]);
      AmbisonicSignal x{Eigen::MatrixXd::Zero(4, 1), 16000};
      for (int c = 0; c < 4; ++c) x.samples(c, 0) = sh[c];
      auto p = PwdEncode(x, m);
      Eigen::Index arg;
      p.samples.col(0).maxCoeff(&arg);
      CHECK(arg == q);
    }
  }
  SECTION("channel mismatch") {
    AmbisonicSignal x{Eigen::MatrixXd::Zero(9, 4), 16000};
    CHECK_THROWS_AS(PwdEncode(x, m), std::invalid_argument);
    PwdSignal p{Eigen::MatrixXd::Zero(3, 4), 16000};
    CHECK_THROWS_AS(PwdDecode(p, m), std::invalid_argument);
  }
}

TEST_CASE("pwd matrix text format round trips at full precision", "[ambi]") {
  auto m = BuildPwdMatrix(2, DefaultGrid(2));
  std::stringstream ss;
  WritePwdMatrixText(ss, m);
  auto back = ReadPwdMatrixText(ss);
  CHECK(back.order == 2);
  CHECK(back.encoder == m.encoder);
  CHECK(back.decoder == m.decoder);
  std::istringstream bad("nonsense");
  CHECK_THROWS(ReadPwdMatrixText(bad));
}
