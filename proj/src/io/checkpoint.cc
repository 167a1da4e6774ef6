// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/io/checkpoint.h"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace pwsep::io {
namespace {

constexpr char kMagic[8] = {'P', 'W', 'S', 'E', 'P', 'C', 'K', 'P'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename U>
void WriteRaw(std::ostream& os, U v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(U));
}

template <typename U>
U ReadRaw(std::istream& is, const std::string& path) {
  U v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(U))) {
    throw std::runtime_error("checkpoint " + path + ": truncated");
  }
  return v;
}

}  // namespace

void SaveCheckpoint(const std::string& path, const nlohmann::json& meta,
                    const ad::ParamRegistry<float>& params) {
  nlohmann::json header;
  header["format_version"] = kCheckpointVersion;
  header["meta"] = meta;
  header["tensors"] = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& [name, t] : params.entries()) {
    header["tensors"].push_back({{"name", name}, {"shape", t.shape}, {"offset", offset}});
    offset += t.size();
  }
  const std::string text = header.dump();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("checkpoint " + path + ": cannot open for writing");
    os.write(kMagic, sizeof(kMagic));
    WriteRaw<std::uint32_t>(os, kCheckpointVersion);
    WriteRaw<std::uint64_t>(os, text.size());
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& [name, t] : params.entries()) {
      os.write(reinterpret_cast<const char*>(t.data.data()),
               static_cast<std::streamsize>(t.data.size() * sizeof(float)));
    }
    if (!os) throw std::runtime_error("checkpoint " + path + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint " + path + ": cannot open");
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw std::runtime_error("checkpoint " + path + ": not a checkpoint file");
  }
  const auto version = ReadRaw<std::uint32_t>(is, path);
  if (version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint " + path + ": unsupported format version " +
                             std::to_string(version));
  }
  const auto len = ReadRaw<std::uint64_t>(is, path);
  std::string text(len, '\0');
  if (!is.read(text.data(), static_cast<std::streamsize>(len))) {
    throw std::runtime_error("checkpoint " + path + ": truncated header");
  }
  const auto header = nlohmann::json::parse(text);
  const std::streamoff data_start = is.tellg();
  Checkpoint ck;
  ck.meta = header.at("meta");
  for (const auto& entry : header.at("tensors")) {
    auto& t = ck.params.Add(entry.at("name").get<std::string>(), entry.at("shape").get<ad::Shape>());
    is.seekg(data_start + static_cast<std::streamoff>(entry.at("offset").get<std::size_t>() * sizeof(float)));
    if (!is.read(reinterpret_cast<char*>(t.data.data()),
                 static_cast<std::streamsize>(t.data.size() * sizeof(float)))) {
      throw std::runtime_error("checkpoint " + path + ": truncated tensor data");
    }
  }
  return ck;
}

}  // namespace pwsep::io
