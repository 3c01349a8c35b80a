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

#ifndef NEUROSTEER_VAD_H_
#define NEUROSTEER_VAD_H_

#include <cstdint>
#include <span>
#include <vector>

#include "neurosteer/aad.h"

namespace neurosteer {

inline constexpr double kDemixedVadAlpha = 0.05;
inline constexpr double kMicVadAlpha = 0.10;

// Binary speech-activity labels at the envelope rate.
struct VadTrack {
  double rate_hz = 20.0;
  std::vector<uint8_t> bits;

  size_t active() const;
};

// bit n = 1 iff env[n] > alpha * max(env). Requires 0 < alpha < 1; throws
// NumericalError when the envelope has no positive value.
VadTrack VadThreshold(std::span<const double> energy_env, double rate_hz,
                      double alpha);

// Copies, per AAD segment, the track of the candidate chosen for that segment.
// Samples after the last full segment follow the last decision. Throws
// ParameterError when a segment has no decision or the tracks differ.
VadTrack AssembleHybridVad(const VadTrack& track1, const VadTrack& track2,
                           const std::vector<AadDecision>& decisions,
                           double frame_len_s = kDefaultAadFrameS);

// Label of each STFT frame: the VAD bit covering the frame's centre sample
// f * hop + fft_len / 2 at `audio_rate_hz`; 0 past the end of the track.
std::vector<uint8_t> ExpandVad(const VadTrack& track, int hop, int fft_len,
                               double audio_rate_hz, int num_frames);

}  // namespace neurosteer

#endif  // NEUROSTEER_VAD_H_
