// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_IO_CHECKPOINT_H_
#define PWSEP_IO_CHECKPOINT_H_

#include <string>

#include "json.hpp"
#include "pwsep/ad/tensor.h"

namespace pwsep::io {

// Layout: 8-byte magic "PWSEPCKP", u32 format version, u64 header length,
// JSON header {format_version, meta, tensors: [{name, shape, offset}]}, then
// the tensors as contiguous little-endian float32 (offsets in elements).
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  nlohmann::json meta;
  ad::ParamRegistry<float> params;
};

// Atomic: writes a sibling temp file and renames it over `path`.
void SaveCheckpoint(const std::string& path, const nlohmann::json& meta,
                    const ad::ParamRegistry<float>& params);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace pwsep::io

#endif  // PWSEP_IO_CHECKPOINT_H_
