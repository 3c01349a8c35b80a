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

#ifndef NEUROSTEER_WAV_IO_H_
#define NEUROSTEER_WAV_IO_H_

#include <string>

#include "neurosteer/audio_buffer.h"

namespace neurosteer {

enum class WavEncoding { kPcm16, kFloat32 };

// Reads 16-bit integer or 32-bit float PCM (plain or WAVE_FORMAT_EXTENSIBLE).
// Integer samples are scaled to [-1, 1). Throws IoError.
AudioBuffer ReadWav(const std::string& path);

// Writes `buffer.samples` (stems are not written). PCM16 clips to [-1, 1].
void WriteWav(const std::string& path, const AudioBuffer& buffer,
              WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace neurosteer

#endif  // NEUROSTEER_WAV_IO_H_
