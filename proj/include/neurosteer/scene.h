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

#ifndef NEUROSTEER_SCENE_H_
#define NEUROSTEER_SCENE_H_

#include <array>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "neurosteer/audio_buffer.h"
#include "neurosteer/hrir.h"

namespace neurosteer {

struct SceneConfig {
  std::array<int, 2> speaker_angles_deg = {-90, 90};
  std::vector<int> noise_angles_deg;
  // Long-term power of each noise source relative to one speech source.
  double noise_power_ratio = 0.1;
  double rate_hz = 16000.0;
  int attended_index = 1;

  void Validate() const;
};

// Five diffuse noise positions: -90, -45, 0, 45, 90 degrees.
std::vector<int> DefaultNoiseAngles();

struct SpeakerPreset {
  std::string name;
  int angle1_deg;
  int angle2_deg;
  int separation_deg() const { return std::abs(angle1_deg - angle2_deg); }
};

// The twelve two-speaker setups, widest separation first.
const std::vector<SpeakerPreset>& SpeakerPresets();
// Throws ConfigError on unknown names.
const SpeakerPreset& FindPreset(const std::string& name);

// Scales two mono signals (truncated to the shorter length) to equal long-term
// power, the mean of their original powers. A silent input stays silent.
// Returns a 2-channel buffer; `*speech_power` receives the common power.
AudioBuffer NormalizeSpeechPair(const AudioBuffer& speech1,
                                const AudioBuffer& speech2,
                                double* speech_power);

// Convolutive mixture of two speakers and optional noise sources. Speech is
// normalized internally; each noise source is scaled to noise_power_ratio
// times the speech power before spatialization. With `keep_stems` the result
// carries stems `speech1`, `speech2` and, when there is noise, `noise`, which
// sum to the mixture.
AudioBuffer SynthesizeScene(const AudioBuffer& speech1,
                            const AudioBuffer& speech2,
                            const std::vector<AudioBuffer>& noise,
                            const HrirSet& hrirs, const SceneConfig& config,
                            bool keep_stems = true);

// The source convolved with each microphone IR, truncated to the source
// length. Returns mics x len.
ChannelMatrix Spatialize(std::span<const double> source, const ChannelMatrix& irs);

// Speech-like test signal: low-passed noise carrier under an envelope made of
// 2-8 envelope-frame segments, each silent with probability 0.5 and otherwise
// a half-sine bump of random level. Unit RMS.
std::vector<double> GenerateSpeechLike(double duration_s, double rate_hz,
                                       uint64_t seed,
                                       double envelope_rate_hz = 20.0);

// Least-squares linear-phase FIR whose magnitude follows the average power
// spectrum of the given signals.
std::vector<double> FitSpectralShape(const std::vector<std::span<const double>>& signals,
                                     int num_taps = 64);

// Independent realizations of speech-shaped noise, each of unit RMS.
std::vector<std::vector<double>> SpeechShapedNoise(
    const std::vector<std::span<const double>>& speech, int count,
    size_t length, uint64_t seed);

}  // namespace neurosteer

#endif  // NEUROSTEER_SCENE_H_
