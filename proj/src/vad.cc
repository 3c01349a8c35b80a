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

#include "neurosteer/vad.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "neurosteer/errors.h"

namespace neurosteer {

size_t VadTrack::active() const {
  return static_cast<size_t>(std::count(bits.begin(), bits.end(), uint8_t{1}));
}

VadTrack VadThreshold(std::span<const double> energy_env, double rate_hz,
                      double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ParameterError("VAD threshold fraction must lie in (0, 1)");
  }
  const double peak =
      energy_env.empty() ? 0.0 : *std::max_element(energy_env.begin(), energy_env.end());
  if (!(peak > 0.0)) throw NumericalError("VAD envelope is all zero");
  VadTrack track;
  track.rate_hz = rate_hz;
  track.bits.reserve(energy_env.size());
  const double threshold = alpha * peak;
  for (double e : energy_env) track.bits.push_back(e > threshold ? 1 : 0);
  return track;
}

VadTrack AssembleHybridVad(const VadTrack& track1, const VadTrack& track2,
                           const std::vector<AadDecision>& decisions,
                           double frame_len_s) {
  if (track1.bits.size() != track2.bits.size() || track1.rate_hz != track2.rate_hz) {
    throw ParameterError("VAD tracks are not aligned");
  }
  const auto segment =
      static_cast<size_t>(std::llround(frame_len_s * track1.rate_hz));
  if (segment < 1) throw ParameterError("AAD segment length must be positive");
  const size_t n = track1.bits.size();
  const size_t segments = std::max<size_t>(1, n / segment);
  std::vector<int> chosen(segments, 0);
  for (const AadDecision& d : decisions) {
    if (d.frame_index >= 0 && static_cast<size_t>(d.frame_index) < segments) {
      chosen[d.frame_index] = d.chosen;
    }
  }
  for (size_t f = 0; f < segments; ++f) {
    if (chosen[f] != 1 && chosen[f] != 2) {
      throw ParameterError("no AAD decision for segment " + std::to_string(f));
    }
  }
  VadTrack out;
  out.rate_hz = track1.rate_hz;
  out.bits.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t f = std::min(i / segment, segments - 1);
    out.bits[i] = chosen[f] == 1 ? track1.bits[i] : track2.bits[i];
  }
  return out;
}

std::vector<uint8_t> ExpandVad(const VadTrack& track, int hop, int fft_len,
                               double audio_rate_hz, int num_frames) {
  if (hop < 1 || fft_len < 1 || !(audio_rate_hz > 0.0) || !(track.rate_hz > 0.0)) {
    throw ParameterError("invalid VAD expansion parameters");
  }
  const double ratio = audio_rate_hz / track.rate_hz;
  const double rounded = std::round(ratio);
  const bool integral = std::abs(ratio - rounded) < 1e-9 * ratio && rounded >= 1.0;
  std::vector<uint8_t> labels(std::max(num_frames, 0), 0);
  for (int f = 0; f < num_frames; ++f) {
    const long long centre = static_cast<long long>(f) * hop + fft_len / 2;
    const long long idx =
        integral ? centre / static_cast<long long>(rounded)
                 : static_cast<long long>(std::floor(centre / ratio));
    if (idx < static_cast<long long>(track.bits.size())) labels[f] = track.bits[idx];
  }
  return labels;
}

}  // namespace neurosteer
