// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_SIM_MANIFEST_H_
#define PWSEP_SIM_MANIFEST_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace pwsep::sim {

// One line of a mixture manifest. Paths are stored relative to the manifest
// directory and resolved on read.
struct MixtureRecord {
  std::string mixture_path;
  std::vector<std::string> target_paths;
  int room_id = -1;
  std::uint64_t seed = 0;

  nlohmann::json ToJson() const;
  static MixtureRecord FromJson(const nlohmann::json& j);
};

// Throws std::runtime_error if the file is missing or a line is malformed.
std::vector<MixtureRecord> ReadMixtureManifest(const std::string& path);

// Writes line-delimited records atomically, with paths rewritten relative
// to the manifest directory.
void WriteMixtureManifest(const std::string& path, const std::vector<MixtureRecord>& records);

// Writes arbitrary records as line-delimited JSON, atomically.
void WriteJsonLines(const std::string& path, const std::vector<nlohmann::json>& records);

}  // namespace pwsep::sim

#endif  // PWSEP_SIM_MANIFEST_H_
