// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"
#include "pwsep/cli/run_config.h"
#include "pwsep/io/checkpoint.h"
#include "pwsep/io/wav.h"
#include "pwsep/sim/manifest.h"

namespace fs = std::filesystem;
using namespace pwsep;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result Run(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "pwsep_cli_test_stdout.txt";
  const std::string cmd = std::string(PWSEP_CLI_PATH) + " " + args + " > " + log.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("pwsep_cli_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& rel) const { return (path / rel).string(); }
};

// A small 8 kHz dataset with train and valid splits from the same rooms.
void MakeDataset(const TempDir& d) {
  const std::string common = "simulate --rooms 2 --rirs-per-room 3 --t60-range 0.2 0.2 --seed 5 --sample-rate 8000 "
                             "--duration 0.25 --utterance-seconds 0.25 --out " + d / "data";
  REQUIRE(Run(common + " --mixtures 3 --split train").code == 0);
  REQUIRE(Run(common + " --mixtures 2 --split valid").code == 0);
}

}  // namespace

TEST_CASE("cli usage errors exit with code 2", "[cli]") {
  CHECK(Run("").code == 2);
  CHECK(Run("no-such-command").code == 2);
  CHECK(Run("--help").code == 0);
  CHECK(Run("param-count --model transformer").code == 2);
  CHECK(Run("param-count --model ambisep --set model.no_such_key=3").code == 2);
  CHECK(Run("param-count --model ambisep --config no-such-file.json").code == 2);
  CHECK(Run("simulate --rooms 0 --rirs-per-room 2 --out /tmp/x").code == 2);
  CHECK(Run("simulate --rooms 1 --rirs-per-room 2 --t60-range 0.5 0.2 --out /tmp/x").code == 2);
  CHECK(Run("train --model ambisep --config toy --data /nonexistent --out /tmp/x").code == 2);
  CHECK(Run("train --model nope --config toy --data /nonexistent --out /tmp/x").code == 2);
}

TEST_CASE("cli param-count", "[cli]") {
  auto oracle = Run("param-count --model oracle --json");
  REQUIRE(oracle.code == 0);
  const auto j = nlohmann::json::parse(oracle.out);
  CHECK(j["total"] == 16384);
  CHECK(j["submodules"].size() == 2);
  CHECK(j["submodules"]["codec.encoder"] == 8192);

  auto amb = Run("param-count --model ambisep --json");
  REQUIRE(amb.code == 0);
  CHECK(nlohmann::json::parse(amb.out)["total"] == 19365377);
  auto split = Run("param-count --model ambisep --set model.masknet.layers=2 --set model.masknet.repeats=4 --json");
  CHECK(nlohmann::json::parse(split.out)["total"] == 19365377);

  // Toy AmbiSep by hand: codec 2*64*16; in_norm 2*64; in_linear 64^2;
  // 6 layers of 4*64^2+4*64 + 64*128+128+128*64+64 + 4*64; prelu 1;
  // out_linear 64*128+128; gates 2*(64^2+64); final 64^2.
  const std::size_t layer = 4 * 64 * 64 + 4 * 64 + 64 * 128 + 128 + 128 * 64 + 64 + 4 * 64;
  const std::size_t toy = 2 * 64 * 16 + 2 * 64 + 64 * 64 + 6 * layer + 1 + (64 * 128 + 128) + 2 * (64 * 64 + 64) + 64 * 64;
  auto t = Run("param-count --model ambisep --config toy --json");
  CHECK(nlohmann::json::parse(t.out)["total"] == toy);
}

TEST_CASE("cli simulate writes deterministic RIR datasets", "[cli]") {
  TempDir d("simulate");
  const std::string args = "simulate --rooms 3 --rirs-per-room 46 --t60-range 0.2 0.25 --order 1 --seed 11 "
                           "--sample-rate 8000 --max-image-order 2 --out ";
  REQUIRE(Run(args + d / "a").code == 0);
  REQUIRE(Run(args + d / "b").code == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(d / "a/rirs")) files += e.path().extension() == ".wav";
  CHECK(files == 138);
  CHECK(Slurp(d / "a/rirs.jsonl") == Slurp(d / "b/rirs.jsonl"));
  CHECK(Slurp(d / "a/rirs/room002_rir045.wav") == Slurp(d / "b/rirs/room002_rir045.wav"));
  const auto w = io::ReadWav(d / "a/rirs/room000_rir000.wav");
  CHECK(w.samples.rows() == 4);
  CHECK(w.sample_rate == 8000);

  REQUIRE(Run("simulate --rooms 1 --rirs-per-room 2 --order 2 --sample-rate 8000 --max-image-order 1 --out " + d / "c").code == 0);
  CHECK(io::ReadWav(d / "c/rirs/room000_rir000.wav").samples.rows() == 9);
}

TEST_CASE("cli simulate writes mixtures that add up", "[cli]") {
  TempDir d("mixtures");
  MakeDataset(d);
  const auto records = sim::ReadMixtureManifest(d / "data/train/mixtures.jsonl");
  REQUIRE(records.size() == 3);
  for (const auto& r : records) {
    const auto mix = io::ReadWav(r.mixture_path);
    REQUIRE(r.target_paths.size() == 2);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(mix.samples.rows(), mix.samples.cols());
    for (const auto& t : r.target_paths) sum += io::ReadWav(t).samples;
    // float32 files: the sum matches to float rounding.
    CHECK((sum - mix.samples).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(mix.samples.cols() == 2000);
  }
  const auto line = Slurp(d / "data/train/mixtures.jsonl");
  CHECK(line.find(d.path.string()) == std::string::npos);
}

TEST_CASE("cli train, separate and evaluate on a toy dataset", "[cli][slow]") {
  TempDir d("pipeline");
  MakeDataset(d);
  const std::string small = " --set model.masknet.chunk=20 --set train.epochs=2";
  REQUIRE(Run("train --model ambisep --config toy --data " + d / "data" + " --out " + d / "run" + small).code == 0);
  for (const char* f : {"checkpoint.ckpt", "final.ckpt", "history.jsonl", "config.json"}) CHECK(fs::exists(d / "run" + "/" + f));
  std::ifstream hist(d / "run/history.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(hist, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("val_loss"));
    ++lines;
  }
  CHECK(lines == 6);
  const auto cfg = nlohmann::json::parse(Slurp(d / "run/config.json"));
  CHECK(cfg["model.codec.filters"] == 64);
  CHECK(cfg["train.epochs"] == 2);

  const std::string mix0 = d / "data/valid/mix/00000_mixture.wav", mix1 = d / "data/valid/mix/00001_mixture.wav";
  REQUIRE(Run("separate --checkpoint " + d / "run/checkpoint.ckpt" + " --in " + mix0 + " " + mix1 + " --out-dir " + d / "est").code == 0);
  const auto in = io::ReadWav(mix0);
  for (int j = 0; j < 2; ++j) {
    const auto est = io::ReadWav(d / ("est/00000_mixture_s" + std::to_string(j) + ".wav"));
    CHECK(est.samples.rows() == 4);
    CHECK(est.samples.cols() == in.samples.cols());
    CHECK(est.sample_rate == in.sample_rate);
  }

  // Zero input gives zero output.
  io::WriteWav(d / "zero.wav", {Eigen::MatrixXd::Zero(4, 2000), 8000});
  REQUIRE(Run("separate --checkpoint " + d / "run/checkpoint.ckpt" + " --in " + d / "zero.wav" + " --out-dir " + d / "est").code == 0);
  CHECK(io::ReadWav(d / "est/zero_s0.wav").samples.isZero(0.0));
  // Channel mismatch is a runtime error.
  io::WriteWav(d / "stereo.wav", {Eigen::MatrixXd::Zero(2, 2000), 8000});
  CHECK(Run("separate --checkpoint " + d / "run/checkpoint.ckpt" + " --in " + d / "stereo.wav" + " --out-dir " + d / "est").code == 1);

  auto ev = Run("evaluate --manifest " + d / "data/valid/mixtures.jsonl" + " --estimates-dir " + d / "est" + " --report " + d / "report.jsonl");
  REQUIRE(ev.code == 0);
  const auto summary = nlohmann::json::parse(ev.out);
  CHECK(summary["count"] == 2);
  std::ifstream report(d / "report.jsonl");
  int records = 0;
  while (std::getline(report, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j.contains("summary")) break;
    for (const char* k : {"si_sdr", "si_sdri", "si_isr", "permutation", "alphas"}) CHECK(j.contains(k));
    ++records;
  }
  CHECK(records == 2);

  // Oracle mode trains the codec only.
  REQUIRE(Run("train --model oracle --config toy --data " + d / "data" + " --out " + d / "oracle" + small).code == 0);
  const auto oracle = io::LoadCheckpoint(d / "oracle/checkpoint.ckpt");
  CHECK(oracle.params.TotalCount() == 2 * 64 * 16);
  for (const auto& [name, t] : oracle.params.entries()) CHECK(name.rfind("codec.", 0) == 0);
  const std::string refs = " --references " + d / "data/valid/mix/00000_s0.wav" + " " + d / "data/valid/mix/00000_s1.wav";
  REQUIRE(Run("separate --checkpoint " + d / "oracle/checkpoint.ckpt" + " --in " + mix0 + refs + " --out-dir " + d / "oest").code == 0);
  CHECK(Run("separate --checkpoint " + d / "oracle/checkpoint.ckpt" + " --in " + mix0 + " --out-dir " + d / "oest").code == 2);
}

TEST_CASE("cli evaluate identities", "[cli]") {
  TempDir d("evaluate");
  MakeDataset(d);
  const std::string base = d / "data/valid/mix/00000";
  const std::string refs = " --references " + base + "_s0.wav " + base + "_s1.wav";
  auto same = Run("evaluate --mixture " + base + "_mixture.wav --estimates " + base + "_s0.wav " + base + "_s1.wav" + refs);
  REQUIRE(same.code == 0);
  const auto s = nlohmann::json::parse(same.out);
  CHECK(s["si_sdr"]["mean"] == 300.0);
  CHECK(s["si_isr"]["mean"] == 300.0);

  auto mix = Run("evaluate --mixture " + base + "_mixture.wav --estimates " + base + "_mixture.wav " + base + "_mixture.wav" + refs);
  REQUIRE(mix.code == 0);
  CHECK(std::abs(nlohmann::json::parse(mix.out)["si_sdri"]["mean"].get<double>()) < 1e-9);

  io::WriteWav(d / "short.wav", {Eigen::MatrixXd::Zero(4, 10), 8000});
  CHECK(Run("evaluate --mixture " + base + "_mixture.wav --estimates " + d / "short.wav" + " " + d / "short.wav" + refs).code == 1);
  CHECK(Run("evaluate --mixture " + base + "_mixture.wav --estimates " + base + "_s0.wav" + refs).code == 2);
}

TEST_CASE("run config resolution", "[cli]") {
  using pipelines::ModelKind;
  const auto toy = cli::PresetConfig("toy", ModelKind::kAmbiSep);
  const auto flat = cli::ToFlatJson(toy);
  CHECK(flat["model.codec.filters"] == 64);
  CHECK(flat["model.kind"] == "ambisep");
  CHECK(flat.contains("train.lr"));
  const auto round = cli::ApplyFlat(toy, flat);
  CHECK(cli::ToFlatJson(round) == flat);

  const auto o = cli::ResolveRunConfig(ModelKind::kOmniSf, "toy", {"train.lr=0.01", "model.masknet.block_order=ichan-last"});
  CHECK(o.train.lr == 0.01);
  CHECK(o.model.kind == ModelKind::kOmniSf);
  CHECK(o.model.masknet.channels == 1);
  CHECK_THROWS_AS(cli::ResolveRunConfig(ModelKind::kAmbiSep, "toy", {"train.lr=fast"}), cli::ConfigError);
  CHECK_THROWS_AS(cli::ResolveRunConfig(ModelKind::kAmbiSep, "toy", {"train.lr"}), cli::ConfigError);
  CHECK_THROWS_AS(cli::ResolveRunConfig(ModelKind::kAmbiSep, "toy", {"model.codec.filters=0"}), cli::ConfigError);
  CHECK_THROWS_AS(cli::PresetConfig("huge", ModelKind::kAmbiSep), cli::ConfigError);

  TempDir d("config");
  std::ofstream(d / "c.json") << R"({"preset": "toy", "model.masknet.repeats": 1, "train.epochs": 3})";
  const auto f = cli::ResolveRunConfig(ModelKind::kAmbiSep, d / "c.json", {"train.epochs=4"});
  CHECK(f.model.masknet.repeats == 1);
  CHECK(f.model.codec.filters == 64);
  CHECK(f.train.epochs == 4);

  std::ofstream(d / "n.json") << R"({"preset": "toy", "model": {"masknet": {"repeats": 1}}, "train.epochs": 3})";
  const auto n = cli::ResolveRunConfig(ModelKind::kAmbiSep, d / "n.json", {});
  CHECK(n.model.masknet.repeats == 1);
  CHECK(n.train.epochs == 3);
  std::ofstream(d / "e.json") << "{}";
  CHECK(cli::ResolveRunConfig(ModelKind::kAmbiSep, d / "e.json", {}).model.codec.filters == 256);
  std::ofstream(d / "bad.json") << R"({"train": {"speed": 2}})";
  CHECK_THROWS_AS(cli::ResolveRunConfig(ModelKind::kAmbiSep, d / "bad.json", {}), cli::ConfigError);
}
