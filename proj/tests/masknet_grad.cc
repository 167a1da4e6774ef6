// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "grad_suite.h"
#include "pwsep/metrics/loss.h"
#include "pwsep/pipelines/model.h"
#include "test_util.h"

namespace pwsep::testing {

ad::GradCheckReport RunToyMasknetGradCheck(std::uint64_t seed, double step, double tolerance) {
  pipelines::ModelConfig cfg;
  cfg.kind = pipelines::ModelKind::kAmbiSep;
  cfg.order = 1;
  cfg.sample_rate = 8000.0;
  cfg.codec = {8, 4, 2};
  cfg.masknet.chunk = 6;
  cfg.masknet.repeats = 1;
  cfg.masknet.layers = 1;
  cfg.masknet.ff_dim = 16;
  cfg.masknet.heads = 2;
  cfg.masknet.sources = 2;
  cfg.Finalize();

  Rng rng(seed);
  ad::ParamRegistry<double> reg;
  pipelines::InitModel(reg, cfg, rng);
  // Move biases and norms off their initial values so every path is exercised.
  for (auto& [name, t] : reg.entries()) {
    if (name.find("ln") != std::string::npos || name.find("norm") != std::string::npos ||
        name.find(".b") != std::string::npos) {
      for (auto& v : t.data) v += rng.Uniform(-0.2, 0.2);
    }
  }
  const std::size_t m = 4, n = 30;
  const auto mixture = RandomVector(rng, m * n);
  const auto targets = RandomVector(rng, 2 * m * n);
  const auto pwd = ambi::BuildPwdMatrix(1, ambi::DefaultGrid(1));

  auto graph = [&](ad::Tape<double>& tape, ad::ParamRegistry<double>& params) {
    auto x = tape.Constant({m, n}, mixture);
    auto out = pipelines::Forward(tape, params, cfg, pwd, x);
    return metrics::NegSiSdrPitLoss(out.estimates, targets);
  };
  return ad::GradCheck(graph, reg, step, tolerance);
}

}  // namespace pwsep::testing
