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

#ifndef NEUROSTEER_AUDIO_BUFFER_H_
#define NEUROSTEER_AUDIO_BUFFER_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace neurosteer {

// Channels x samples, one contiguous row per channel.
using ChannelMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Stem labels produced by scene synthesis.
inline constexpr char kSpeech1Stem[] = "speech1";
inline constexpr char kSpeech2Stem[] = "speech2";
inline constexpr char kNoiseStem[] = "noise";

// Multi-channel waveform. When `stems` is non-empty, each stem has the same
// shape as `samples` and the stems sum to `samples`.
struct AudioBuffer {
  double rate_hz = 0.0;
  ChannelMatrix samples;
  std::map<std::string, ChannelMatrix> stems;

  int channels() const { return static_cast<int>(samples.rows()); }
  Eigen::Index length() const { return samples.cols(); }
  bool has_stems() const { return !stems.empty(); }

  std::span<const double> channel(int c) const {
    return {samples.row(c).data(), static_cast<size_t>(samples.cols())};
  }

  const ChannelMatrix& stem(const std::string& label) const;

  // Throws ParameterError when rate, shapes or the stem sum are inconsistent.
  void Validate(double stem_rel_tol = 1e-6) const;

  static AudioBuffer Mono(std::vector<double> samples, double rate_hz);
};

inline std::span<const double> RowSpan(const ChannelMatrix& m, Eigen::Index r) {
  return {m.row(r).data(), static_cast<size_t>(m.cols())};
}

inline std::vector<double> RowVector(const ChannelMatrix& m, Eigen::Index r) {
  return {m.row(r).data(), m.row(r).data() + m.cols()};
}

// Mean power (mean square) over all samples of a span.
double MeanPower(std::span<const double> x);

}  // namespace neurosteer

#endif  // NEUROSTEER_AUDIO_BUFFER_H_
