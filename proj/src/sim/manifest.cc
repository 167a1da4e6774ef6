// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/sim/manifest.h"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace pwsep::sim {
namespace fs = std::filesystem;

nlohmann::json MixtureRecord::ToJson() const {
  return {{"mixture_path", mixture_path}, {"target_paths", target_paths}, {"room_id", room_id}, {"seed", seed}};
}

MixtureRecord MixtureRecord::FromJson(const nlohmann::json& j) {
  MixtureRecord r;
  r.mixture_path = j.at("mixture_path").get<std::string>();
  r.target_paths = j.at("target_paths").get<std::vector<std::string>>();
  r.room_id = j.at("room_id").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

std::vector<MixtureRecord> ReadMixtureManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  const fs::path dir = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (dir / p).string(); };
  std::vector<MixtureRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto r = MixtureRecord::FromJson(nlohmann::json::parse(line));
      r.mixture_path = resolve(r.mixture_path);
      for (auto& t : r.target_paths) t = resolve(t);
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void WriteJsonLines(const std::string& path, const std::vector<nlohmann::json>& records) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    for (const auto& r : records) out << r.dump() << '\n';
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  fs::rename(tmp, path);
}

void WriteMixtureManifest(const std::string& path, const std::vector<MixtureRecord>& records) {
  const fs::path dir = fs::absolute(fs::path(path)).parent_path();
  auto relative = [&](const std::string& p) { return fs::absolute(fs::path(p)).lexically_relative(dir).string(); };
  std::vector<nlohmann::json> lines;
  for (auto r : records) {
    r.mixture_path = relative(r.mixture_path);
    for (auto& t : r.target_paths) t = relative(t);
    lines.push_back(r.ToJson());
  }
  WriteJsonLines(path, lines);
}

}  // namespace pwsep::sim
