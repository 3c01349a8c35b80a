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

#ifndef NEUROSTEER_HRIR_H_
#define NEUROSTEER_HRIR_H_

#include <map>
#include <string>
#include <vector>

#include "neurosteer/audio_buffer.h"

namespace neurosteer {

// Head-related impulse responses indexed by azimuth (degrees, positive to
// the right). Each entry is mics x taps.
struct HrirSet {
  int mics = 0;
  double rate_hz = 0.0;
  std::map<int, ChannelMatrix> impulse_responses;

  std::vector<int> angles_deg() const;
  bool Has(int angle_deg) const { return impulse_responses.contains(angle_deg); }
  // Throws ConfigError when the angle is missing.
  const ChannelMatrix& At(int angle_deg) const;
  void Validate() const;
};

// A microphone on one ear (-1 left, +1 right), displaced `offset_m` towards
// the front along the head's front-back axis.
struct MicPosition {
  int ear = -1;
  double offset_m = 0.0;
};

// Three behind-the-ear microphones per ear, 7.5 mm apart. Left ear first.
std::vector<MicPosition> DefaultMicLayout();

// Parametric head model constants.
inline constexpr double kHeadRadiusM = 0.0875;
inline constexpr double kSpeedOfSoundMps = 343.0;
inline constexpr double kMaxShadowDb = 4.0;
inline constexpr int kParametricHrirTaps = 256;

// Woodworth arrival time (seconds, relative to the head centre) at the ear on
// `ear` side for a far-field source at `angle_deg`.
double WoodworthDelay(double angle_deg, int ear);

// Fractional-delay IRs from the spherical-head model: Woodworth delay plus
// the microphone offset; the contralateral ear is attenuated by
// 10^(-|sin a| * kMaxShadowDb / 20) and low-passed by a one-pole filter with
// cutoff 6000 - 4500 |sin a| Hz. Returns mics x kParametricHrirTaps.
ChannelMatrix SynthHrir(double angle_deg, const std::vector<MicPosition>& mics,
                        double rate_hz);

HrirSet ParametricHrirSet(const std::vector<int>& angles_deg,
                          const std::vector<MicPosition>& mics, double rate_hz);

// Reads a manifest of `<angle> = <wav path>` lines (paths relative to the
// manifest's directory; an optional `[hrir]` section header is allowed) and
// resamples every IR to `target_rate_hz`.
HrirSet LoadHrirSet(const std::string& manifest_path, double target_rate_hz);

}  // namespace neurosteer

#endif  // NEUROSTEER_HRIR_H_
