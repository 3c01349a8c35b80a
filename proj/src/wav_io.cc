// Copyright 2026 The Neurosteer Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "neurosteer/wav_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "neurosteer/errors.h"

namespace neurosteer {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t ReadU16(const uint8_t* p) { return static_cast<uint16_t>(p[0] | (p[1] << 8)); }
uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>(v >> 8));
}
void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xFF));
}
void PutTag(std::vector<uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

AudioBuffer ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw IoError("not a RIFF/WAVE file: " + path);
  }
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const uint8_t* data = nullptr;
  size_t data_size = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    const uint32_t size = ReadU32(chunk + 4);
    const size_t body = pos + 8;
    if (body + size > bytes.size()) {
      if (std::memcmp(chunk, "data", 4) == 0) {
        data = bytes.data() + body;  // tolerate truncated data chunk
        data_size = bytes.size() - body;
      }
      break;
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0 && size >= 16) {
      format = ReadU16(chunk + 8);
      channels = ReadU16(chunk + 10);
      rate = ReadU32(chunk + 12);
      bits = ReadU16(chunk + 22);
      if (format == kFormatExtensible && size >= 40) {
        format = ReadU16(chunk + 8 + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (channels == 0 || rate == 0 || data == nullptr) {
    throw IoError("WAV file lacks fmt or data chunk: " + path);
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw IoError("unsupported WAV encoding (need PCM16 or float32): " + path);
  }
  const size_t frame_bytes = static_cast<size_t>(channels) * (bits / 8);
  const size_t frames = data_size / frame_bytes;

  AudioBuffer out;
  out.rate_hz = rate;
  out.samples.resize(channels, static_cast<Eigen::Index>(frames));
  for (size_t f = 0; f < frames; ++f) {
    for (uint16_t c = 0; c < channels; ++c) {
      const uint8_t* p = data + f * frame_bytes + c * (bits / 8);
      double v;
      if (pcm16) {
        v = static_cast<int16_t>(ReadU16(p)) / 32768.0;
      } else {
        v = std::bit_cast<float>(ReadU32(p));
      }
      out.samples(c, static_cast<Eigen::Index>(f)) = v;
    }
  }
  return out;
}

void WriteWav(const std::string& path, const AudioBuffer& buffer,
              WavEncoding encoding) {
  const auto channels = static_cast<uint16_t>(buffer.channels());
  const uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const auto rate = static_cast<uint32_t>(std::lround(buffer.rate_hz));
  const size_t frames = static_cast<size_t>(buffer.length());
  const auto data_size = static_cast<uint32_t>(frames * channels * (bits / 8));

  std::vector<uint8_t> out;
  out.reserve(44 + data_size);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_size);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat);
  PutU16(out, channels);
  PutU32(out, rate);
  PutU32(out, rate * channels * (bits / 8));
  PutU16(out, static_cast<uint16_t>(channels * (bits / 8)));
  PutU16(out, bits);
  PutTag(out, "data");
  PutU32(out, data_size);
  for (size_t f = 0; f < frames; ++f) {
    for (uint16_t c = 0; c < channels; ++c) {
      const double v = buffer.samples(c, static_cast<Eigen::Index>(f));
      if (encoding == WavEncoding::kPcm16) {
        const double scaled = std::clamp(v, -1.0, 1.0) * 32767.0;
        PutU16(out, static_cast<uint16_t>(static_cast<int16_t>(std::lround(scaled))));
      } else {
        PutU32(out, std::bit_cast<uint32_t>(static_cast<float>(v)));
      }
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write WAV file: " + path);
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("short write to WAV file: " + path);
}

}  // namespace neurosteer
