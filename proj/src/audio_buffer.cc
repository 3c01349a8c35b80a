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

#include "neurosteer/audio_buffer.h"

#include <cmath>
#include <string>

#include "neurosteer/errors.h"

namespace neurosteer {

const ChannelMatrix& AudioBuffer::stem(const std::string& label) const {
  auto it = stems.find(label);
  if (it == stems.end()) {
    throw ParameterError("audio buffer has no stem '" + label + "'");
  }
  return it->second;
}

void AudioBuffer::Validate(double stem_rel_tol) const {
  if (!(rate_hz > 0.0)) throw ParameterError("sample rate must be positive");
  if (stems.empty()) return;
  ChannelMatrix sum = ChannelMatrix::Zero(samples.rows(), samples.cols());
  for (const auto& [label, stem] : stems) {
    if (stem.rows() != samples.rows() || stem.cols() != samples.cols()) {
      throw ParameterError("stem '" + label + "' shape differs from samples");
    }
    sum += stem;
  }
  if (samples.size() == 0) return;
  const double scale = std::max(samples.cwiseAbs().maxCoeff(), 1e-300);
  if ((sum - samples).cwiseAbs().maxCoeff() > stem_rel_tol * scale) {
    throw ParameterError("stems do not sum to the mixture");
  }
}

AudioBuffer AudioBuffer::Mono(std::vector<double> samples, double rate_hz) {
  AudioBuffer out;
  out.rate_hz = rate_hz;
  out.samples = Eigen::Map<const ChannelMatrix>(
      samples.data(), 1, static_cast<Eigen::Index>(samples.size()));
  return out;
}

double MeanPower(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

}  // namespace neurosteer
