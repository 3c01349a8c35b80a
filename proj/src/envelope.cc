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

#include "neurosteer/envelope.h"

#include <algorithm>
#include <cmath>

#include "neurosteer/dsp.h"
#include "neurosteer/errors.h"

namespace neurosteer {

std::string EnvelopeKindName(EnvelopeKind kind) {
  return kind == EnvelopeKind::kEnergy ? "energy" : "amplitude";
}

EnvelopeKind ParseEnvelopeKind(const std::string& name) {
  if (name == "energy") return EnvelopeKind::kEnergy;
  if (name == "amplitude") return EnvelopeKind::kAmplitude;
  throw ParameterError("unknown envelope kind '" + name + "'");
}

int EnvelopeWindow(double audio_rate_hz, double envelope_rate_hz) {
  if (!(audio_rate_hz > 0.0) || !(envelope_rate_hz > 0.0)) {
    throw ParameterError("envelope and audio rates must be positive");
  }
  const double t = audio_rate_hz / envelope_rate_hz;
  const double rounded = std::round(t);
  if (rounded < 1.0 || std::abs(t - rounded) > 1e-9 * t) {
    throw ParameterError("audio rate is not an integer multiple of the envelope rate");
  }
  return static_cast<int>(rounded);
}

EnvelopeMatrix ShortTimeEnergy(const ChannelMatrix& signal, double rate_hz,
                               double envelope_rate_hz) {
  const int t = EnvelopeWindow(rate_hz, envelope_rate_hz);
  const Eigen::Index frames = signal.cols() / t;
  EnvelopeMatrix out;
  out.kind = EnvelopeKind::kEnergy;
  out.rate_hz = rate_hz / t;
  out.values.resize(signal.rows(), frames);
  for (Eigen::Index c = 0; c < signal.rows(); ++c) {
    for (Eigen::Index n = 0; n < frames; ++n) {
      out.values(c, n) = signal.row(c).segment(n * t, t).squaredNorm() / t;
    }
  }
  return out;
}

EnvelopeMatrix ShortTimeEnergy(const AudioBuffer& buffer,
                               double envelope_rate_hz) {
  return ShortTimeEnergy(buffer.samples, buffer.rate_hz, envelope_rate_hz);
}

std::vector<double> ToAmplitudeBand(std::span<const double> energy,
                                    double rate_hz) {
  const std::vector<double> taps = FirBandpassDesign(
      kEnvelopeBandLowHz, kEnvelopeBandHighHz, rate_hz, kEnvelopeBandTaps);
  std::vector<double> root(energy.size());
  for (size_t i = 0; i < energy.size(); ++i) {
    root[i] = std::sqrt(std::max(energy[i], 0.0));
  }
  return FilterCentered(root, taps);
}

EnvelopeMatrix ToAmplitudeBand(const EnvelopeMatrix& energy) {
  if (energy.kind != EnvelopeKind::kEnergy) {
    throw ParameterError("amplitude band conversion needs an energy envelope");
  }
  EnvelopeMatrix out;
  out.kind = EnvelopeKind::kAmplitude;
  out.rate_hz = energy.rate_hz;
  out.values.resize(energy.values.rows(), energy.values.cols());
  for (int c = 0; c < energy.channels(); ++c) {
    const std::vector<double> y = ToAmplitudeBand(energy.channel(c), energy.rate_hz);
    for (size_t n = 0; n < y.size(); ++n) out.values(c, static_cast<Eigen::Index>(n)) = y[n];
  }
  return out;
}

Eigen::MatrixXd EstimateEnergyMixing(const ChannelMatrix& dry,
                                     const std::vector<ChannelMatrix>& contributions,
                                     double rate_hz, double envelope_rate_hz) {
  if (static_cast<size_t>(dry.rows()) != contributions.size()) {
    throw ParameterError("one contribution per dry source is required");
  }
  const EnvelopeMatrix e_dry = ShortTimeEnergy(dry, rate_hz, envelope_rate_hz);
  const Eigen::Index sources = dry.rows();
  const Eigen::Index mics = sources > 0 ? contributions[0].rows() : 0;
  Eigen::MatrixXd a(mics, sources);
  for (Eigen::Index j = 0; j < sources; ++j) {
    if (contributions[j].rows() != mics || contributions[j].cols() != dry.cols()) {
      throw ParameterError("contribution shape does not match the dry sources");
    }
    const Eigen::RowVectorXd s = e_dry.values.row(j);
    const double ss = s.squaredNorm();
    if (!(ss > 0.0)) {
      throw NumericalError("source " + std::to_string(j + 1) +
                           " is silent; mixing gain undefined");
    }
    const EnvelopeMatrix e_c =
        ShortTimeEnergy(contributions[j], rate_hz, envelope_rate_hz);
    for (Eigen::Index i = 0; i < mics; ++i) {
      a(i, j) = e_c.values.row(i).dot(s) / ss;
    }
  }
  return a;
}

}  // namespace neurosteer
