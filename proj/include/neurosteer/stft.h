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

#ifndef NEUROSTEER_STFT_H_
#define NEUROSTEER_STFT_H_

#include <vector>

#include <Eigen/Core>

#include "neurosteer/audio_buffer.h"

namespace neurosteer {

inline constexpr int kDefaultFftLen = 512;
inline constexpr int kDefaultHop = 256;

// Short-time spectra of a multi-channel signal. data[c](frame, bin).
struct StftFrames {
  int fft_len = 0;
  int hop = 0;
  double rate_hz = 0.0;
  std::vector<double> window;
  std::vector<Eigen::MatrixXcd> data;

  int bins() const { return fft_len / 2 + 1; }
  int channels() const { return static_cast<int>(data.size()); }
  int frames() const {
    return data.empty() ? 0 : static_cast<int>(data.front().rows());
  }
};

// Periodic square-root Hann window, sin(pi n / N). Its square overlaps to a
// constant for any hop that divides N/2.
std::vector<double> SqrtHannWindow(int fft_len);

// Frames are floor((len - fft_len) / hop) + 1; no padding is applied.
StftFrames Stft(const ChannelMatrix& signal, double rate_hz, int fft_len,
                int hop);
StftFrames Stft(const AudioBuffer& buffer, int fft_len, int hop);

// Inverse FFT, synthesis window and overlap-add, normalized by the window
// overlap constant. Output length is (frames - 1) * hop + fft_len.
AudioBuffer WolaSynthesize(const StftFrames& frames);

}  // namespace neurosteer

#endif  // NEUROSTEER_STFT_H_
