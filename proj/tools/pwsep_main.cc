// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

// pwsep: simulate, train, separate, evaluate, param-count.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pwsep/ambi/pwd.h"
#include "pwsep/cli/run_config.h"
#include "pwsep/io/checkpoint.h"
#include "pwsep/io/wav.h"
#include "pwsep/metrics/metrics.h"
#include "pwsep/pipelines/model.h"
#include "pwsep/sim/dataset.h"
#include "pwsep/sim/manifest.h"
#include "pwsep/train/trainer.h"
#include "pwsep/util/rng.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pwsep;

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void Log(const std::string& msg) { std::cerr << "[pwsep] " << msg << std::endl; }

// Stable string hash for deriving per-split seeds.
std::uint64_t Fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

io::WavData ToWav(const ambi::AmbisonicSignal& s) { return {s.samples, static_cast<int>(s.sample_rate)}; }

ambi::AmbisonicSignal ReadSignal(const std::string& path) {
  auto w = io::ReadWav(path);
  return {w.samples, static_cast<double>(w.sample_rate)};
}

std::string Pad(int v, int width) {
  std::string s = std::to_string(v);
  return std::string(std::max(0, width - static_cast<int>(s.size())), '0') + s;
}

pipelines::ModelKind ParseKindOrUsage(const std::string& name) {
  try {
    return pipelines::ParseModelKind(name);
  } catch (const std::invalid_argument&) {
    throw UsageError("unknown model '" + name + "' (expected ambisep, omni-sf, pwd-sf or oracle)");
  }
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  int rooms = 0;
  int rirs_per_room = 0;
  std::vector<double> t60_range = {0.2, 0.5};
  int order = 1;
  std::uint64_t seed = 0;
  std::string out;
  double sample_rate = 16000.0;
  int max_image_order = 10;
  int first_room_id = 0;
  int mixtures = 0;
  std::string split;
  double duration = 5.0;
  double utterance_seconds = 4.0;
  int speakers = 20;
  std::string speech_dir;
};

std::vector<sim::Utterance> LoadSpeechDir(const std::string& dir, double sample_rate) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no .wav files under " + dir);
  std::map<std::string, int> speaker_ids;
  std::vector<sim::Utterance> out;
  for (const auto& f : files) {
    const auto rel = f.lexically_relative(dir);
    const std::string speaker = std::distance(rel.begin(), rel.end()) > 1 ? rel.begin()->string() : f.stem().string();
    const int id = speaker_ids.emplace(speaker, static_cast<int>(speaker_ids.size())).first->second;
    auto w = io::ReadWav(f.string());
    if (w.sample_rate != static_cast<int>(sample_rate)) {
      throw std::runtime_error(f.string() + " is at " + std::to_string(w.sample_rate) + " Hz, expected " +
                               std::to_string(static_cast<int>(sample_rate)));
    }
    sim::Utterance u;
    u.speaker = id;
    u.seed = Fnv1a(rel.string());
    u.samples = w.samples.row(0).transpose();
    out.push_back(std::move(u));
  }
  return out;
}

int RunSimulate(const SimulateArgs& a) {
  if (a.rooms < 1 || a.rirs_per_room < 1) throw UsageError("--rooms and --rirs-per-room must be positive");
  if (a.t60_range.size() != 2 || !(a.t60_range[0] > 0.0) || a.t60_range[1] < a.t60_range[0]) {
    throw UsageError("--t60-range needs 0 < min <= max");
  }
  if (a.order < 0 || a.order > 3) throw UsageError("--order must be in 0..3");
  if (a.mixtures < 0 || (a.mixtures > 0 && a.rirs_per_room < 2)) {
    throw UsageError("mixtures need at least two RIRs per room");
  }
  if (!(a.sample_rate > 0.0) || !(a.duration > 0.0) || !(a.utterance_seconds > 0.0) || a.speakers < 2) {
    throw UsageError("--sample-rate, --duration and --utterance-seconds must be positive, --speakers >= 2");
  }
  sim::SceneOptions opts;
  opts.t60_min = a.t60_range[0];
  opts.t60_max = a.t60_range[1];
  opts.sample_rate = a.sample_rate;
  opts.max_image_order = a.max_image_order;
  const int threads = sim::NumThreadsFromEnv();
  Log("simulating " + std::to_string(a.rooms * a.rirs_per_room) + " RIRs on " + std::to_string(threads) + " thread(s)");
  const auto rooms = sim::SimulateRooms(a.rooms, a.rirs_per_room, opts, a.order, a.seed, a.first_room_id, threads);

  const fs::path out(a.out);
  fs::create_directories(out / "rirs");
  std::vector<json> rir_lines;
  for (const auto& room : rooms) {
    for (std::size_t i = 0; i < room.rirs.size(); ++i) {
      const std::string rel = "rirs/room" + Pad(room.room_id, 3) + "_rir" + Pad(static_cast<int>(i), 3) + ".wav";
      io::WriteWav((out / rel).string(), ToWav(room.rirs[i]));
      rir_lines.push_back({{"path", rel},
                           {"room_id", room.room_id},
                           {"index", i},
                           {"seed", room.seed},
                           {"order", a.order},
                           {"sample_rate", a.sample_rate},
                           {"t60", room.room.t60},
                           {"dims", room.room.dims},
                           {"array_pos", room.room.array_pos},
                           {"source_pos", room.sources[i].position}});
    }
  }
  sim::WriteJsonLines((out / "rirs.jsonl").string(), rir_lines);
  Log("wrote " + std::to_string(rir_lines.size()) + " RIRs to " + (out / "rirs").string());

  if (a.mixtures == 0) return 0;
  const std::uint64_t split_seed = Rng::Derive(a.seed, Fnv1a(a.split));
  std::vector<sim::Utterance> corpus;
  if (!a.speech_dir.empty()) {
    corpus = LoadSpeechDir(a.speech_dir, a.sample_rate);
  } else {
    const int per_speaker = (2 * a.mixtures + a.speakers - 1) / a.speakers + 1;
    corpus = sim::SynthesizeCorpus(a.speakers, per_speaker, a.utterance_seconds, a.sample_rate, split_seed);
  }
  const auto pairs = sim::MakePairs(corpus, a.mixtures, Rng::Derive(split_seed, 1));
  const auto assoc = sim::RemixRooms(rooms, a.mixtures, Rng::Derive(split_seed, 2), 1);
  const fs::path dir = out / a.split;
  fs::create_directories(dir / "mix");
  std::vector<sim::MixtureRecord> records;
  for (int k = 0; k < a.mixtures; ++k) {
    const auto ex = sim::MixPair(corpus, pairs[k], rooms, assoc[k], a.duration);
    sim::MixtureRecord r;
    const std::string stem = "mix/" + Pad(k, 5);
    r.mixture_path = (dir / (stem + "_mixture.wav")).string();
    io::WriteWav(r.mixture_path, ToWav(ex.mixture));
    for (std::size_t j = 0; j < ex.targets.size(); ++j) {
      r.target_paths.push_back((dir / (stem + "_s" + std::to_string(j) + ".wav")).string());
      io::WriteWav(r.target_paths.back(), ToWav(ex.targets[j]));
    }
    r.room_id = ex.room_id;
    r.seed = ex.seed;
    records.push_back(std::move(r));
  }
  sim::WriteMixtureManifest((dir / "mixtures.jsonl").string(), records);
  Log("wrote " + std::to_string(records.size()) + " mixtures to " + (dir / "mixtures.jsonl").string());
  return 0;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string model;
  std::string config = "full";
  std::string data;
  std::string out;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

std::vector<train::Example> LoadExamples(const std::string& manifest, const pipelines::ModelConfig& cfg) {
  std::vector<train::Example> out;
  for (const auto& r : sim::ReadMixtureManifest(manifest)) {
    sim::MixtureExample ex;
    ex.mixture = ReadSignal(r.mixture_path);
    for (const auto& t : r.target_paths) ex.targets.push_back(ReadSignal(t));
    ex.room_id = r.room_id;
    ex.seed = r.seed;
    if (ex.mixture.sample_rate != cfg.sample_rate || ex.mixture.channels() != cfg.num_channels()) {
      throw std::runtime_error(r.mixture_path + ": expected " + std::to_string(cfg.num_channels()) + " channels at " +
                               std::to_string(static_cast<int>(cfg.sample_rate)) + " Hz");
    }
    if (ex.targets.size() != cfg.masknet.sources) {
      throw std::runtime_error(r.mixture_path + ": expected " + std::to_string(cfg.masknet.sources) + " targets");
    }
    for (const auto& t : ex.targets) {
      if (t.samples.rows() != ex.mixture.samples.rows() || t.samples.cols() != ex.mixture.samples.cols()) {
        throw std::runtime_error(r.mixture_path + ": target shape differs from the mixture");
      }
    }
    out.push_back(train::Example::FromMixture(ex));
  }
  if (out.empty()) throw std::runtime_error(manifest + " lists no mixtures");
  return out;
}

int RunTrain(const TrainArgs& a) {
  const auto kind = ParseKindOrUsage(a.model);
  auto cfg = cli::ResolveRunConfig(kind, a.config, a.overrides);
  if (a.seed) cfg.train.seed = *a.seed;
  const fs::path data(a.data), out(a.out);
  const fs::path train_manifest = data / "train" / "mixtures.jsonl", valid_manifest = data / "valid" / "mixtures.jsonl";
  if (!fs::exists(train_manifest)) throw UsageError("missing training manifest " + train_manifest.string());
  fs::create_directories(out);

  json resolved = cli::ToFlatJson(cfg);
  resolved["data"] = fs::absolute(data).string();
  resolved["config"] = a.config;
  std::ofstream(out / "config.json") << resolved.dump(2) << '\n';

  const auto train_set = LoadExamples(train_manifest.string(), cfg.model);
  std::vector<train::Example> valid_set;
  if (fs::exists(valid_manifest)) {
    valid_set = LoadExamples(valid_manifest.string(), cfg.model);
  } else {
    Log("no validation manifest; the schedule follows the mean training loss");
  }
  const auto pwd = ambi::BuildPwdMatrix(cfg.model.order, ambi::DefaultGrid(cfg.model.order));
  ad::ParamRegistry<float> params;
  Rng rng(Rng::Derive(cfg.train.seed, Fnv1a("init")));
  pipelines::InitModel(params, cfg.model, rng);
  Log(pipelines::ModelKindName(kind) + ": " + std::to_string(params.TotalCount()) + " parameters, " +
      std::to_string(train_set.size()) + " training and " + std::to_string(valid_set.size()) + " validation mixtures");

  cfg.train.checkpoint_path = (out / "checkpoint.ckpt").string();
  cfg.train.history_path = (out / "history.jsonl").string();
  const auto result = train::Train(
      params, cfg.model, pwd, [&](int) { return train_set; }, valid_set, cfg.train,
      [](const train::HistoryRecord& r) {
        if (r.val_loss) {
          char buf[160];
          std::snprintf(buf, sizeof buf, "epoch %d step %ld train %.3f val %.3f lr %.3g", r.epoch, r.step,
                        r.train_loss, *r.val_loss, r.lr);
          Log(buf);
        }
      });
  io::SaveCheckpoint((out / "final.ckpt").string(),
                     {{"model", pipelines::ToJson(cfg.model)}, {"train", train::ToJson(cfg.train)}, {"step", result.steps}},
                     params);
  Log("best validation loss " + std::to_string(result.best_val_loss) + " at epoch " + std::to_string(result.best_epoch));
  return 0;
}

// ---------------------------------------------------------------- separate

struct SeparateArgs {
  std::string checkpoint;
  std::vector<std::string> in;
  std::string out_dir;
  std::vector<std::string> references;
};

int RunSeparate(const SeparateArgs& a) {
  if (!fs::exists(a.checkpoint)) throw UsageError("missing checkpoint " + a.checkpoint);
  for (const auto& in : a.in)
    if (!fs::exists(in)) throw UsageError("missing input " + in);
  auto ckpt = io::LoadCheckpoint(a.checkpoint);
  const auto cfg = pipelines::ModelConfigFromJson(ckpt.meta.at("model"));
  std::vector<ambi::AmbisonicSignal> refs;
  for (const auto& r : a.references) refs.push_back(ReadSignal(r));
  if (cfg.kind == pipelines::ModelKind::kOracle && (refs.size() != cfg.masknet.sources || a.in.size() != 1)) {
    throw UsageError("the oracle model separates one input and needs --references with one file per source");
  }
  const auto pwd = ambi::BuildPwdMatrix(cfg.order, ambi::DefaultGrid(cfg.order));
  fs::create_directories(a.out_dir);
  for (const auto& in : a.in) {
    const auto x = ReadSignal(in);
    if (x.channels() != cfg.num_channels()) {
      throw std::runtime_error(in + " has " + std::to_string(x.channels()) + " channels, the model expects " +
                               std::to_string(cfg.num_channels()));
    }
    const auto out = pipelines::Separate(ckpt.params, cfg, pwd, x, refs.empty() ? nullptr : &refs);
    const std::string stem = fs::path(in).stem().string();
    for (std::size_t j = 0; j < out.estimates.size(); ++j) {
      const auto path = fs::path(a.out_dir) / (stem + "_s" + std::to_string(j) + ".wav");
      io::WriteWav(path.string(), ToWav(out.estimates[j]));
      std::cout << path.string() << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::vector<std::string> estimates;
  std::vector<std::string> references;
  std::string mixture;
  std::string manifest;
  std::string estimates_dir;
  std::string report;
  int isr_taps = metrics::kDefaultIsrTaps;
};

json RecordJson(const metrics::EvalRecord& r, const std::string& mixture) {
  return {{"mixture", mixture},         {"si_sdr", r.si_sdr},
          {"si_sdri", r.si_sdri},       {"si_isr", r.si_isr},
          {"mixture_si_sdr", r.mixture_si_sdr}, {"mixture_si_isr", r.mixture_si_isr},
          {"permutation", r.permutation}, {"alphas", r.alphas},
          {"isr_taps", r.isr_taps}};
}

int RunEvaluate(const EvaluateArgs& a) {
  if (a.isr_taps < 1) throw UsageError("--isr-taps must be positive");
  struct Item {
    std::string mixture;
    std::vector<std::string> estimates, references;
  };
  std::vector<Item> items;
  if (!a.manifest.empty()) {
    if (a.estimates_dir.empty()) throw UsageError("--manifest needs --estimates-dir");
    if (!fs::exists(a.manifest)) throw UsageError("missing manifest " + a.manifest);
    for (const auto& r : sim::ReadMixtureManifest(a.manifest)) {
      Item it{r.mixture_path, {}, r.target_paths};
      const std::string stem = fs::path(r.mixture_path).stem().string();
      for (std::size_t j = 0; j < r.target_paths.size(); ++j) {
        it.estimates.push_back((fs::path(a.estimates_dir) / (stem + "_s" + std::to_string(j) + ".wav")).string());
      }
      items.push_back(std::move(it));
    }
  } else {
    if (a.mixture.empty() || a.estimates.empty()) throw UsageError("give --mixture, --estimates and --references, or --manifest");
    if (a.estimates.size() != a.references.size()) throw UsageError("--estimates and --references differ in count");
    items.push_back({a.mixture, a.estimates, a.references});
  }

  std::vector<json> lines;
  std::vector<double> sdr, sdri, isr, mix_isr;
  for (const auto& it : items) {
    const auto mix = ReadSignal(it.mixture);
    std::vector<Eigen::MatrixXd> est, ref;
    for (const auto& p : it.estimates) est.push_back(ReadSignal(p).samples);
    for (const auto& p : it.references) ref.push_back(ReadSignal(p).samples);
    const auto r = metrics::Evaluate(mix.samples, est, ref, a.isr_taps);
    lines.push_back(RecordJson(r, it.mixture));
    sdr.push_back(r.si_sdr);
    sdri.push_back(r.si_sdri);
    isr.push_back(r.si_isr);
    mix_isr.push_back(r.mixture_si_isr);
  }
  auto ms = [](const std::vector<double>& v) {
    const auto s = metrics::Summarize(v);
    return json{{"mean", s.mean}, {"std", s.stddev}};
  };
  const json summary = {{"count", items.size()},     {"isr_taps", a.isr_taps},  {"si_sdr", ms(sdr)},
                        {"si_sdri", ms(sdri)},       {"si_isr", ms(isr)},       {"mixture_si_isr", ms(mix_isr)}};
  lines.push_back({{"summary", summary}});
  if (!a.report.empty()) {
    if (const auto parent = fs::path(a.report).parent_path(); !parent.empty()) fs::create_directories(parent);
    sim::WriteJsonLines(a.report, lines);
  }
  std::cout << summary.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------- param-count

struct ParamCountArgs {
  std::string model;
  std::string config = "full";
  std::vector<std::string> overrides;
  bool json_out = false;
};

// Groups parameter names into submodules: the first two name components, or
// three for repeated masknet blocks.
std::string Submodule(const std::string& name) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t dot; (dot = name.find('.', start)) != std::string::npos; start = dot + 1) {
    parts.push_back(name.substr(start, dot - start));
  }
  parts.push_back(name.substr(start));
  std::size_t keep = parts.size() > 1 && parts[1].rfind("repeat", 0) == 0 ? 3 : 2;
  keep = std::min(keep, parts.size());
  std::string out = parts[0];
  for (std::size_t i = 1; i < keep; ++i) out += "." + parts[i];
  return out;
}

int RunParamCount(const ParamCountArgs& a) {
  const auto kind = ParseKindOrUsage(a.model);
  const auto cfg = cli::ResolveRunConfig(kind, a.config, a.overrides);
  ad::ParamRegistry<float> reg;
  Rng rng(0);
  pipelines::InitModel(reg, cfg.model, rng);
  std::vector<std::pair<std::string, std::size_t>> groups;
  for (const auto& [name, t] : reg.entries()) {
    const std::string g = Submodule(name);
    if (groups.empty() || groups.back().first != g) groups.emplace_back(g, 0);
    groups.back().second += t.size();
  }
  const std::size_t total = reg.TotalCount();
  if (total != pipelines::ModelParamCount(cfg.model)) {
    throw std::runtime_error("registry count differs from the closed-form count");
  }
  if (a.json_out) {
    json j = {{"model", pipelines::ModelKindName(kind)}, {"total", total}, {"submodules", json::object()}};
    for (const auto& [g, n] : groups) j["submodules"][g] = n;
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::size_t width = 5;
  for (const auto& [g, n] : groups) width = std::max(width, g.size());
  for (const auto& [g, n] : groups) std::printf("%-*s %12zu\n", static_cast<int>(width), g.c_str(), n);
  std::printf("%-*s %12zu\n", static_cast<int>(width), "total", total);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ambisonic source separation: simulate, train, separate, evaluate"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Simulate Ambisonic RIRs and optionally reverberant mixtures");
  simulate->add_option("--rooms", sim_args.rooms, "Number of rooms")->required();
  simulate->add_option("--rirs-per-room", sim_args.rirs_per_room, "Source positions per room")->required();
  simulate->add_option("--t60-range", sim_args.t60_range, "Min and max T60 in seconds")->expected(2);
  simulate->add_option("--order", sim_args.order, "Ambisonic order");
  simulate->add_option("--seed", sim_args.seed, "Master seed");
  simulate->add_option("--out", sim_args.out, "Output directory")->required();
  simulate->add_option("--sample-rate", sim_args.sample_rate, "Sample rate in Hz");
  simulate->add_option("--max-image-order", sim_args.max_image_order, "Image-source reflection order");
  simulate->add_option("--first-room-id", sim_args.first_room_id, "Id of the first room (keeps splits disjoint)");
  simulate->add_option("--mixtures", sim_args.mixtures, "Number of two-source mixtures to write");
  simulate->add_option("--split", sim_args.split, "Subdirectory for the mixtures, e.g. train");
  simulate->add_option("--duration", sim_args.duration, "Maximum mixture length in seconds");
  simulate->add_option("--utterance-seconds", sim_args.utterance_seconds, "Synthetic utterance length");
  simulate->add_option("--speakers", sim_args.speakers, "Synthetic speaker count");
  simulate->add_option("--speech-dir", sim_args.speech_dir, "Directory of mono speech WAVs (one subdirectory per speaker)");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a separation model");
  train_cmd->add_option("--model", train_args.model, "ambisep, omni-sf, pwd-sf or oracle")->required();
  train_cmd->add_option("--config", train_args.config, "Preset (toy, full) or JSON file of dotted keys");
  train_cmd->add_option("--data", train_args.data, "Dataset directory with train/ and valid/ manifests")->required();
  train_cmd->add_option("--out", train_args.out, "Output directory")->required();
  train_cmd->add_option("--set", train_args.overrides, "Config override key=value (repeatable)");
  train_cmd->add_option("--seed", train_args.seed, "Overrides train.seed");

  SeparateArgs sep_args;
  auto* separate = app.add_subcommand("separate", "Separate an Ambisonic mixture");
  separate->add_option("--checkpoint", sep_args.checkpoint, "Checkpoint file")->required();
  separate->add_option("--in", sep_args.in, "Mixture WAVs")->required();
  separate->add_option("--out-dir", sep_args.out_dir, "Output directory")->required();
  separate->add_option("--references", sep_args.references, "Source images (oracle model only)");

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Score estimates with SI-SDR, SI-SDRi and SI-ISR");
  evaluate->add_option("--estimates", eval_args.estimates, "Estimate WAVs");
  evaluate->add_option("--references", eval_args.references, "Reference source-image WAVs");
  evaluate->add_option("--mixture", eval_args.mixture, "Mixture WAV");
  evaluate->add_option("--manifest", eval_args.manifest, "Mixture manifest to score in bulk");
  evaluate->add_option("--estimates-dir", eval_args.estimates_dir, "Directory of <mixture>_s<j>.wav estimates");
  evaluate->add_option("--report", eval_args.report, "Line-delimited JSON report");
  evaluate->add_option("--isr-taps", eval_args.isr_taps, "SI-ISR projection filter length");

  ParamCountArgs pc_args;
  auto* param_count = app.add_subcommand("param-count", "Print parameter counts per submodule");
  param_count->add_option("--model", pc_args.model, "ambisep, omni-sf, pwd-sf or oracle")->required();
  param_count->add_option("--config", pc_args.config, "Preset (toy, full) or JSON file of dotted keys");
  param_count->add_option("--set", pc_args.overrides, "Config override key=value (repeatable)");
  param_count->add_flag("--json", pc_args.json_out, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate) return RunSimulate(sim_args);
    if (*train_cmd) return RunTrain(train_args);
    if (*separate) return RunSeparate(sep_args);
    if (*evaluate) return RunEvaluate(eval_args);
    if (*param_count) return RunParamCount(pc_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
