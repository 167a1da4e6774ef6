// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "pwsep/pipelines/model.h"
#include "test_util.h"

using namespace pwsep;
using namespace pwsep::pipelines;
using pwsep::testing::RandomVector;

namespace {

ModelConfig Tiny(ModelKind kind) {
  ModelConfig cfg;
  cfg.kind = kind;
  cfg.sample_rate = 8000;
  cfg.codec = {8, 4, 2};
  cfg.masknet.chunk = 6;
  cfg.masknet.repeats = 1;
  cfg.masknet.layers = 1;
  cfg.masknet.ff_dim = 16;
  cfg.masknet.heads = 2;
  cfg.Finalize();
  return cfg;
}

// W = H with encoder rows +-e_k: relu splits each frame into positive and
// negative parts, and the matching decoder puts them back exactly.
void MakeIdentityCodec(ad::ParamRegistry<double>& reg, const ModelConfig& cfg) {
  auto& enc = reg.Get(net::kEncoderName).data;
  auto& dec = reg.Get(net::kDecoderName).data;
  std::fill(enc.begin(), enc.end(), 0.0);
  std::fill(dec.begin(), dec.end(), 0.0);
  const std::size_t w = cfg.codec.kernel;
  for (std::size_t k = 0; k < w; ++k) {
    enc[(2 * k) * w + k] = 1.0;
    enc[(2 * k + 1) * w + k] = -1.0;
    dec[(2 * k) * w + k] = 1.0;
    dec[(2 * k + 1) * w + k] = -1.0;
  }
}

}  // namespace

TEST_CASE("all pipelines produce J estimates of the mixture's shape", "[pipelines]") {
  const auto pwd = ambi::BuildPwdMatrix(1, ambi::DefaultGrid(1));
  Rng rng(1);
  const std::size_t n = 41;
  const auto x = RandomVector(rng, 4 * n);
  const auto targets = RandomVector(rng, 2 * 4 * n);
  for (auto kind : {ModelKind::kAmbiSep, ModelKind::kOmniSf, ModelKind::kPwdSf, ModelKind::kOracle}) {
    INFO(ModelKindName(kind));
    const auto cfg = Tiny(kind);
    ad::ParamRegistry<double> reg;
    InitModel(reg, cfg, rng);
    CHECK(reg.TotalCount() == ModelParamCount(cfg));
    ad::Tape<double> tape;
    auto out = Forward(tape, reg, cfg, pwd, tape.Constant({4, n}, x), &targets);
    CHECK(out.estimates.shape() == ad::Shape{2, 4, n});
    CHECK(out.masks.dim(0) == 2);
    CHECK(out.masks.dim(1) == (kind == ModelKind::kOmniSf ? 1u : 4u));

    ad::Tape<double> zt;
    auto zero = Forward(zt, reg, cfg, pwd, zt.Constant({4, n}, std::vector<double>(4 * n, 0.0)), &targets);
    if (kind != ModelKind::kPwdSf) {
      CHECK(std::all_of(zero.estimates.value().begin(), zero.estimates.value().end(),
                        [](double v) { return v == 0.0; }));
    }
  }
  const auto cfg = Tiny(ModelKind::kOracle);
  ad::ParamRegistry<double> reg;
  InitModel(reg, cfg, rng);
  ad::Tape<double> tape;
  CHECK_THROWS_AS(Forward(tape, reg, cfg, pwd, tape.Constant({4, n}, x)), std::invalid_argument);
  CHECK_THROWS_AS(Forward(tape, reg, cfg, pwd, tape.Constant({9, n}, std::vector<double>(9 * n))),
                  ad::ShapeError);
}

TEST_CASE("Omni-SF masks depend on the omni channel only", "[pipelines]") {
  const auto cfg = Tiny(ModelKind::kOmniSf);
  const auto pwd = ambi::BuildPwdMatrix(1, ambi::DefaultGrid(1));
  Rng rng(2);
  ad::ParamRegistry<double> reg;
  InitModel(reg, cfg, rng);
  const std::size_t n = 40;
  auto x = RandomVector(rng, 4 * n);
  auto x0 = x;
  std::fill(x0.begin() + n, x0.end(), 0.0);
  ad::Tape<double> tape;
  auto a = Forward(tape, reg, cfg, pwd, tape.Constant({4, n}, x));
  auto b = Forward(tape, reg, cfg, pwd, tape.Constant({4, n}, x0));
  CHECK(a.masks.value() == b.masks.value());
  CHECK(a.masks.dim(1) == 1);
}

TEST_CASE("oracle Wiener masks", "[pipelines]") {
  Rng rng(3);
  const auto tf = RandomVector(rng, 3 * 500, 0.0, 2.0);
  const auto m = OracleWienerMasks(tf, 3);
  for (std::size_t i = 0; i < 500; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      const double v = m[j * 500 + i];
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      s += v;
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  // Bins: source 2 only, source 1 only, equal magnitudes, both silent.
  const auto m2 = OracleWienerMasks<double>({0.0, 3.0, 2.0, 0.0, 2.0, 0.0, 2.0, 0.0}, 2);
  CHECK(m2 == std::vector<double>{0.0, 1.0, 0.5, 0.5, 1.0, 0.0, 0.5, 0.5});
  CHECK_THROWS_AS(OracleWienerMasks<double>({1, 2, 3}, 2), std::invalid_argument);
}

TEST_CASE("oracle masks with an identity codec sum back to the mixture", "[pipelines]") {
  auto cfg = Tiny(ModelKind::kOracle);
  cfg.codec = {8, 4, 4};
  cfg.Finalize();
  const auto pwd = ambi::BuildPwdMatrix(1, ambi::DefaultGrid(1));
  Rng rng(4);
  ad::ParamRegistry<double> reg;
  InitModel(reg, cfg, rng);
  MakeIdentityCodec(reg, cfg);
  const std::size_t n = 64;
  const auto targets = RandomVector(rng, 2 * 4 * n);
  std::vector<double> x(4 * n);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = targets[i] + targets[4 * n + i];
  ad::Tape<double> tape;
  auto out = Forward(tape, reg, cfg, pwd, tape.Constant({4, n}, x), &targets);
  const auto& e = out.estimates.value();
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(e[i] + e[4 * n + i] - x[i]) < 1e-10);
}

TEST_CASE("config serialization and presets", "[pipelines]") {
  for (auto kind : {ModelKind::kAmbiSep, ModelKind::kOmniSf, ModelKind::kPwdSf, ModelKind::kOracle}) {
    auto cfg = ModelConfig::Toy(kind);
    cfg.masknet.order = net::BlockOrder::kInterChannelLast;
    auto back = ModelConfigFromJson(ToJson(cfg));
    CHECK(ToJson(back) == ToJson(cfg));
    CHECK(back.masknet.interchannel == (kind == ModelKind::kAmbiSep));
  }
  const auto toy = ModelConfig::Toy(ModelKind::kAmbiSep);
  CHECK(toy.codec.filters == 64);
  CHECK(toy.codec.kernel == 16);
  CHECK(toy.codec.stride == 8);
  CHECK(toy.masknet.chunk == 50);
  CHECK(toy.masknet.repeats == 2);
  CHECK(toy.masknet.ff_dim == 128);
  CHECK(toy.masknet.heads == 4);
  CHECK_THROWS_AS(ParseModelKind("sepformer"), std::invalid_argument);
}

TEST_CASE("float inference wrapper", "[pipelines]") {
  const auto cfg = Tiny(ModelKind::kAmbiSep);
  const auto pwd = ambi::BuildPwdMatrix(1, ambi::DefaultGrid(1));
  Rng rng(5);
  ad::ParamRegistry<float> reg;
  InitModel(reg, cfg, rng);
  ambi::AmbisonicSignal x{Eigen::MatrixXd::Random(4, 50), 8000};
  auto out = Separate(reg, cfg, pwd, x);
  REQUIRE(out.estimates.size() == 2);
  CHECK(out.estimates[0].channels() == 4);
  CHECK(out.estimates[1].length() == 50);
  x.sample_rate = 16000;
  CHECK_THROWS_AS(Separate(reg, cfg, pwd, x), std::invalid_argument);
}
