// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/pipelines/model.h"

#include <stdexcept>

#include "pwsep/net/layers.h"

namespace pwsep::pipelines {

std::string ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kAmbiSep:
      return "ambisep";
    case ModelKind::kOmniSf:
      return "omni-sf";
    case ModelKind::kPwdSf:
      return "pwd-sf";
    case ModelKind::kOracle:
      return "oracle";
  }
  return "?";
}

ModelKind ParseModelKind(const std::string& s) {
  for (auto k : {ModelKind::kAmbiSep, ModelKind::kOmniSf, ModelKind::kPwdSf, ModelKind::kOracle}) {
    if (ModelKindName(k) == s) return k;
  }
  throw std::invalid_argument("unknown model '" + s + "' (ambisep, omni-sf, pwd-sf, oracle)");
}

ModelConfig ModelConfig::Full(ModelKind kind, std::size_t layers, std::size_t repeats) {
  ModelConfig cfg;
  cfg.kind = kind;
  cfg.sample_rate = 16000.0;
  cfg.codec = {256, 32, 16};
  cfg.masknet.features = 256;
  cfg.masknet.chunk = 250;
  cfg.masknet.layers = layers;
  cfg.masknet.repeats = repeats;
  cfg.masknet.ff_dim = 1024;
  cfg.masknet.heads = 8;
  cfg.Finalize();
  return cfg;
}

ModelConfig ModelConfig::Toy(ModelKind kind) {
  ModelConfig cfg;
  cfg.kind = kind;
  cfg.sample_rate = 8000.0;
  cfg.codec = {64, 16, 8};
  cfg.masknet.features = 64;
  cfg.masknet.chunk = 50;
  cfg.masknet.layers = 1;
  cfg.masknet.repeats = 2;
  cfg.masknet.ff_dim = 128;
  cfg.masknet.heads = 4;
  cfg.Finalize();
  return cfg;
}

void ModelConfig::Finalize() {
  if (order < 0) throw std::invalid_argument("model: negative Ambisonic order");
  codec.Validate();
  masknet.features = codec.filters;
  masknet.channels = kind == ModelKind::kOmniSf ? 1 : static_cast<std::size_t>(num_channels());
  masknet.interchannel = kind == ModelKind::kAmbiSep;
  if (kind != ModelKind::kOracle) masknet.Validate();
}

nlohmann::json ToJson(const ModelConfig& cfg) {
  const auto& m = cfg.masknet;
  return {{"kind", ModelKindName(cfg.kind)},
          {"order", cfg.order},
          {"sample_rate", cfg.sample_rate},
          {"codec", {{"filters", cfg.codec.filters}, {"kernel", cfg.codec.kernel}, {"stride", cfg.codec.stride}}},
          {"masknet",
           {{"chunk", m.chunk},
            {"repeats", m.repeats},
            {"layers", m.layers},
            {"ff_dim", m.ff_dim},
            {"heads", m.heads},
            {"sources", m.sources},
            {"block_order", net::BlockOrderName(m.order)}}}};
}

ModelConfig ModelConfigFromJson(const nlohmann::json& j) {
  ModelConfig cfg;
  cfg.kind = ParseModelKind(j.at("kind").get<std::string>());
  cfg.order = j.at("order").get<int>();
  cfg.sample_rate = j.at("sample_rate").get<double>();
  const auto& c = j.at("codec");
  cfg.codec = {c.at("filters").get<std::size_t>(), c.at("kernel").get<std::size_t>(),
               c.at("stride").get<std::size_t>()};
  const auto& m = j.at("masknet");
  cfg.masknet.chunk = m.at("chunk").get<std::size_t>();
  cfg.masknet.repeats = m.at("repeats").get<std::size_t>();
  cfg.masknet.layers = m.at("layers").get<std::size_t>();
  cfg.masknet.ff_dim = m.at("ff_dim").get<std::size_t>();
  cfg.masknet.heads = m.at("heads").get<std::size_t>();
  cfg.masknet.sources = m.at("sources").get<std::size_t>();
  cfg.masknet.order = net::ParseBlockOrder(m.at("block_order").get<std::string>());
  cfg.Finalize();
  return cfg;
}

std::size_t ModelParamCount(ModelConfig cfg) {
  cfg.Finalize();
  std::size_t n = net::CodecParamCount(cfg.codec);
  if (cfg.kind == ModelKind::kOracle) return n;
  n += net::MasknetParamCount(cfg.masknet);
  if (cfg.kind == ModelKind::kPwdSf) {
    n += net::TransformerLayerParamCount(cfg.masknet.features, cfg.masknet.ff_dim);
  }
  return n;
}

template <typename T>
void InitModel(ad::ParamRegistry<T>& reg, ModelConfig cfg, Rng& rng) {
  cfg.Finalize();
  net::InitCodec(reg, cfg.codec, rng);
  if (cfg.kind == ModelKind::kOracle) return;
  net::InitMasknet(reg, cfg.masknet, rng);
  if (cfg.kind == ModelKind::kPwdSf) net::InitPostTransformer(reg, cfg.masknet.features, cfg.masknet.ff_dim, rng);
}

template <typename T>
std::vector<T> OracleWienerMasks(const std::vector<T>& tf, std::size_t sources) {
  if (sources == 0 || tf.size() % sources != 0) {
    throw std::invalid_argument("OracleWienerMasks: size is not a multiple of the source count");
  }
  const std::size_t per = tf.size() / sources;
  std::vector<T> masks(tf.size());
  for (std::size_t i = 0; i < per; ++i) {
    double den = 0.0;
    for (std::size_t j = 0; j < sources; ++j) den += static_cast<double>(tf[j * per + i]) * tf[j * per + i];
    for (std::size_t j = 0; j < sources; ++j) {
      const double v = tf[j * per + i];
      masks[j * per + i] = den > 0.0 ? static_cast<T>(v * v / den) : static_cast<T>(1.0 / sources);
    }
  }
  return masks;
}

template <typename T>
ModelOutput<T> Forward(ad::Tape<T>& tape, ad::ParamRegistry<T>& reg, const ModelConfig& cfg,
                       const ambi::PwdMatrix& pwd, ad::Var<T> x, const std::vector<T>* targets) {
  const std::size_t m = static_cast<std::size_t>(cfg.num_channels());
  if (x.rank() != 2 || x.dim(0) != m) {
    throw ad::ShapeError("Forward", "expected mixture [" + std::to_string(m) + ", N], got " +
                                        ad::ShapeToString(x.shape()));
  }
  if (pwd.order != cfg.order) throw std::invalid_argument("Forward: PWD matrix order differs from the model");
  const std::size_t n = x.dim(1), j = cfg.masknet.sources, q = static_cast<std::size_t>(pwd.num_directions());
  const std::size_t f = cfg.codec.filters;

  auto matrix_const = [&](const Eigen::MatrixXd& a) {
    std::vector<T> v(static_cast<std::size_t>(a.size()));
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c) v[r * a.cols() + c] = static_cast<T>(a(r, c));
    return tape.Constant({static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols())}, v);
  };

  ModelOutput<T> out;
  if (cfg.kind == ModelKind::kOmniSf) {
    auto omni = ad::FitLength(x, 0, 1);
    out.masks = net::MasknetForward(tape, reg, cfg.masknet, net::TfEncode(tape, reg, cfg.codec, omni));
    auto e = net::TfEncode(tape, reg, cfg.codec, x);   // [M, F, T]
    auto masked = ad::Mul(out.masks, e);                // [J, M, F, T]
    const std::size_t t = e.dim(2);
    auto dec = net::TfDecode(tape, reg, cfg.codec, ad::Reshape(masked, {j * m, f, t}), n);
    out.estimates = ad::Reshape(dec, {j, m, n});
    return out;
  }

  auto y = matrix_const(pwd.encoder);
  auto ydag = matrix_const(pwd.decoder);
  auto p = ad::Matmul(y, x);                        // [Q, N]
  auto e = net::TfEncode(tape, reg, cfg.codec, p);  // [Q, F, T]
  const std::size_t t = e.dim(2);
  if (cfg.kind == ModelKind::kOracle) {
    if (!targets || targets->size() != j * m * n) {
      throw std::invalid_argument("Forward: the oracle model needs [J, M, N] source images");
    }
    auto c = tape.Constant({j, m, n}, *targets);
    auto ec = net::TfEncode(tape, reg, cfg.codec, ad::Reshape(ad::Matmul(y, c), {j * q, n}));
    const std::vector<T> tf(ec.value().begin(), ec.value().end());
    out.masks = tape.Constant({j, q, f, t}, OracleWienerMasks(tf, j));
  } else {
    out.masks = net::MasknetForward(tape, reg, cfg.masknet, e);
  }
  auto masked = ad::Reshape(ad::Mul(out.masks, e), {j * q, f, t});
  auto dec = ad::Reshape(net::TfDecode(tape, reg, cfg.codec, masked, n), {j, q, n});
  if (cfg.kind == ModelKind::kPwdSf) dec = net::PostTransformer(tape, reg, dec, f, cfg.masknet.heads);
  out.estimates = ad::Matmul(ydag, dec);  // [J, M, N]
  return out;
}

SeparationOutput Separate(ad::ParamRegistry<float>& reg, const ModelConfig& cfg,
                          const ambi::PwdMatrix& pwd, const ambi::AmbisonicSignal& x,
                          const std::vector<ambi::AmbisonicSignal>* targets) {
  const std::size_t m = static_cast<std::size_t>(x.channels()), n = static_cast<std::size_t>(x.length());
  if (x.sample_rate != cfg.sample_rate) {
    throw std::invalid_argument("Separate: mixture sample rate " + std::to_string(x.sample_rate) +
                                " differs from the model's " + std::to_string(cfg.sample_rate));
  }
  ad::Tape<float> tape;
  std::vector<float> xv(m * n);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t i = 0; i < n; ++i) xv[c * n + i] = static_cast<float>(x.samples(c, i));
  std::vector<float> tv;
  if (targets) {
    for (const auto& t : *targets)
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t i = 0; i < n; ++i) tv.push_back(static_cast<float>(t.samples(c, i)));
  }
  auto out = Forward(tape, reg, cfg, pwd, tape.Constant({m, n}, xv), targets ? &tv : nullptr);
  SeparationOutput res;
  const auto& ev = out.estimates.value();
  const std::size_t j = out.estimates.dim(0);
  for (std::size_t s = 0; s < j; ++s) {
    ambi::AmbisonicSignal est{Eigen::MatrixXd(m, n), x.sample_rate};
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t i = 0; i < n; ++i) est.samples(c, i) = ev[(s * m + c) * n + i];
    res.estimates.push_back(std::move(est));
  }
  res.masks = ad::ToTensor(out.masks);
  return res;
}

#define PWSEP_INSTANTIATE_MODEL(T)                                                            \
  template void InitModel<T>(ad::ParamRegistry<T>&, ModelConfig, Rng&);                       \
  template std::vector<T> OracleWienerMasks<T>(const std::vector<T>&, std::size_t);           \
  template ModelOutput<T> Forward<T>(ad::Tape<T>&, ad::ParamRegistry<T>&, const ModelConfig&, \
                                     const ambi::PwdMatrix&, ad::Var<T>, const std::vector<T>*);

PWSEP_INSTANTIATE_MODEL(float)
PWSEP_INSTANTIATE_MODEL(double)

}  // namespace pwsep::pipelines
