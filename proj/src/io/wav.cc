// Copyright 2026 The pwsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "pwsep/io/wav.h"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace pwsep::io {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t U32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t U16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

void PutU32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
void PutU16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
}
void PutTag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

[[noreturn]] void Fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("wav " + path + ": " + what);
}

}  // namespace

WavData ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(path, "cannot open");
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0) {
    Fail(path, "not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const unsigned char* chunk = buf.data() + pos;
    const std::size_t size = U32(chunk + 4);
    const std::size_t avail = std::min(size, buf.size() - pos - 8);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) Fail(path, "short fmt chunk");
      format = U16(chunk + 8);
      channels = U16(chunk + 10);
      rate = U32(chunk + 12);
      bits = U16(chunk + 22);
      if (format == kFormatExtensible) {
        if (avail < 40) Fail(path, "short extensible fmt chunk");
        format = U16(chunk + 32);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = avail;
    }
    pos += 8 + size + (size & 1);
  }
  if (channels == 0 || rate == 0) Fail(path, "missing fmt chunk");
  if (!data) Fail(path, "missing data chunk");
  const bool pcm = format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32);
  const bool flt = format == kFormatFloat && (bits == 32 || bits == 64);
  if (!pcm && !flt) {
    Fail(path, "unsupported encoding (format " + std::to_string(format) + ", " +
                   std::to_string(bits) + " bits)");
  }
  const std::size_t bytes = bits / 8;
  const std::size_t frames = data_size / (bytes * channels);
  WavData wav;
  wav.sample_rate = static_cast<int>(rate);
  wav.samples.resize(channels, static_cast<Eigen::Index>(frames));
  const unsigned char* p = data;
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c, p += bytes) {
      double v = 0.0;
      if (flt && bits == 32) {
        float f;
        std::uint32_t u = U32(p);
        std::memcpy(&f, &u, 4);
        v = f;
      } else if (flt) {
        std::uint64_t u = U32(p) | (static_cast<std::uint64_t>(U32(p + 4)) << 32);
        std::memcpy(&v, &u, 8);
      } else if (bits == 16) {
        v = static_cast<std::int16_t>(U16(p)) / 32768.0;
      } else if (bits == 24) {
        std::int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
        if (s & 0x800000) s -= 1 << 24;
        v = s / 8388608.0;
      } else {
        v = static_cast<std::int32_t>(U32(p)) / 2147483648.0;
      }
      wav.samples(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(n)) = v;
    }
  }
  return wav;
}

void WriteWav(const std::string& path, const WavData& wav) {
  const auto channels = static_cast<std::uint16_t>(wav.samples.rows());
  const auto frames = static_cast<std::uint32_t>(wav.samples.cols());
  if (channels == 0) throw std::invalid_argument("WriteWav: no channels");
  const std::uint32_t data_bytes = frames * channels * 4u;
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatFloat);
  PutU16(out, channels);
  PutU32(out, static_cast<std::uint32_t>(wav.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(wav.sample_rate) * channels * 4u);
  PutU16(out, static_cast<std::uint16_t>(channels * 4));
  PutU16(out, 32);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (std::uint32_t n = 0; n < frames; ++n) {
    for (std::uint16_t c = 0; c < channels; ++c) {
      const float f = static_cast<float>(wav.samples(c, n));
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      PutU32(out, u);
    }
  }
  // Write to a sibling temp file and rename so readers never see a partial file.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("wav " + path + ": cannot open for writing");
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("wav " + path + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace pwsep::io
