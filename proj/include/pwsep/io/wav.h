// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PWSEP_IO_WAV_H_
#define PWSEP_IO_WAV_H_

#include <Eigen/Dense>
#include <string>

namespace pwsep::io {

// Channels x frames, values nominally in [-1, 1].
struct WavData {
  Eigen::MatrixXd samples;
  int sample_rate = 16000;
};

// Reads 16/24/32-bit PCM and 32/64-bit float files, plain or extensible
// format. Throws std::runtime_error on anything else.
WavData ReadWav(const std::string& path);

// Writes 32-bit IEEE float. Samples are not clipped.
void WriteWav(const std::string& path, const WavData& wav);

}  // namespace pwsep::io

#endif  // PWSEP_IO_WAV_H_
