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

#ifndef NEUROSTEER_DSP_H_
#define NEUROSTEER_DSP_H_

#include <span>
#include <vector>

#include "neurosteer/audio_buffer.h"

namespace neurosteer {

// Linear-phase windowed-sinc (Hamming) band-pass with 6 dB cutoffs at
// `low_hz` and `high_hz`. Requires 0 < low < high < rate/2 and odd taps.
std::vector<double> FirBandpassDesign(double low_hz, double high_hz,
                                      double rate_hz, int num_taps);

// Full linear convolution, length len(signal) + len(kernel) - 1. Long inputs
// go through FFT overlap-add.
std::vector<double> Convolve(std::span<const double> signal,
                             std::span<const double> kernel);

// Convolution with an odd-length linear-phase kernel, trimmed so the output
// is aligned with the input (group delay removed) and has the same length.
std::vector<double> FilterCentered(std::span<const double> signal,
                                   std::span<const double> kernel);

// Band-limited polyphase resampling. Output length is
// round(len * target_hz / rate_hz).
std::vector<double> Resample(std::span<const double> signal, double rate_hz,
                             double target_hz);

// Resamples every channel and every stem with the same filter.
AudioBuffer Resample(const AudioBuffer& buffer, double target_hz);
// Same, releasing each input matrix as soon as it has been resampled.
AudioBuffer Resample(AudioBuffer&& buffer, double target_hz);

}  // namespace neurosteer

#endif  // NEUROSTEER_DSP_H_
