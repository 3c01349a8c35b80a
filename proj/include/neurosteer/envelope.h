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

#ifndef NEUROSTEER_ENVELOPE_H_
#define NEUROSTEER_ENVELOPE_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "neurosteer/audio_buffer.h"

namespace neurosteer {

inline constexpr double kDefaultEnvelopeRateHz = 20.0;
inline constexpr double kEnvelopeBandLowHz = 1.0;
inline constexpr double kEnvelopeBandHighHz = 9.5;
inline constexpr int kEnvelopeBandTaps = 127;

enum class EnvelopeKind { kEnergy, kAmplitude };

std::string EnvelopeKindName(EnvelopeKind kind);
// Throws ParameterError on anything but "energy" or "amplitude".
EnvelopeKind ParseEnvelopeKind(const std::string& name);

// Channels x frames at `rate_hz`. Energy envelopes are non-negative.
struct EnvelopeMatrix {
  EnvelopeKind kind = EnvelopeKind::kEnergy;
  double rate_hz = kDefaultEnvelopeRateHz;
  ChannelMatrix values;

  int channels() const { return static_cast<int>(values.rows()); }
  Eigen::Index frames() const { return values.cols(); }
  std::span<const double> channel(int c) const { return RowSpan(values, c); }
};

// Window length T = audio_rate / envelope_rate; throws ParameterError unless
// T is a positive integer.
int EnvelopeWindow(double audio_rate_hz, double envelope_rate_hz);

// Mean square over non-overlapping windows of T samples:
// E[n] = (1/T) sum_{w<T} m[nT + w]^2. Output has floor(len / T) frames.
EnvelopeMatrix ShortTimeEnergy(const ChannelMatrix& signal, double rate_hz,
                               double envelope_rate_hz);
EnvelopeMatrix ShortTimeEnergy(const AudioBuffer& buffer,
                               double envelope_rate_hz);

// Square root followed by the 1-9.5 Hz band-pass. Requires an energy
// envelope; the output may be negative.
EnvelopeMatrix ToAmplitudeBand(const EnvelopeMatrix& energy);
std::vector<double> ToAmplitudeBand(std::span<const double> energy,
                                    double rate_hz);

// Least-squares gains A (K x S) such that the energy envelope of source j's
// contribution at mic i is approximately A(i, j) times the energy envelope of
// the dry source j. `dry` is S x len; contributions[j] is K x len. Throws
// NumericalError for a silent source.
Eigen::MatrixXd EstimateEnergyMixing(const ChannelMatrix& dry,
                                     const std::vector<ChannelMatrix>& contributions,
                                     double rate_hz, double envelope_rate_hz);

}  // namespace neurosteer

#endif  // NEUROSTEER_ENVELOPE_H_
