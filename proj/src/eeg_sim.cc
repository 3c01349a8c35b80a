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

#include "neurosteer/eeg_sim.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include <unsupported/Eigen/FFT>

#include "neurosteer/dsp.h"
#include "neurosteer/envelope.h"
#include "neurosteer/errors.h"
#include "neurosteer/rng.h"

namespace neurosteer {
namespace {

std::vector<double> SmoothedKernel(Rng& rng, int taps) {
  std::vector<double> raw(taps);
  for (double& g : raw) g = rng.Normal();
  std::vector<double> out(taps);
  for (int i = 0; i < taps; ++i) {
    double acc = raw[i];
    if (i > 0) acc += raw[i - 1];
    if (i + 1 < taps) acc += raw[i + 1];
    out[i] = acc / 3.0;
  }
  return out;
}

// White noise shaped by 1/sqrt(f) in the frequency domain (1/f power).
std::vector<double> PinkNoise(Rng& rng, size_t n) {
  std::vector<std::complex<double>> white(n);
  for (auto& w : white) w = rng.Normal();
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, white);
  for (size_t b = 1; b < n; ++b) {
    const size_t f = std::min(b, n - b);
    spec[b] /= std::sqrt(static_cast<double>(f));
  }
  std::vector<std::complex<double>> time;
  fft.inv(time, spec);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = time[i].real();
  return out;
}

}  // namespace

EegRecording SimulateEeg(std::span<const double> attended_env,
                         std::span<const double> unattended_env, double rate_hz,
                         const EegSimulatorConfig& config) {
  if (attended_env.size() != unattended_env.size()) {
    throw ParameterError("attended and unattended envelopes differ in length");
  }
  if (config.kappa < 1 || config.tau_max_model < 0) {
    throw ParameterError("simulator needs kappa >= 1 and tau_max_model >= 0");
  }
  const size_t n = attended_env.size();
  const std::vector<double> band = FirBandpassDesign(
      kEnvelopeBandLowHz, kEnvelopeBandHighHz, rate_hz, kEnvelopeBandTaps);
  Rng rng(config.seed);
  EegRecording eeg;
  eeg.rate_hz = rate_hz;
  eeg.values.resize(config.kappa, static_cast<Eigen::Index>(n));
  for (int k = 0; k < config.kappa; ++k) {
    const std::vector<double> g = SmoothedKernel(rng, config.tau_max_model + 1);
    const std::vector<double> gu = SmoothedKernel(rng, config.tau_max_model + 1);
    const std::vector<double> ya = Convolve(attended_env, g);
    const std::vector<double> yu = Convolve(unattended_env, gu);
    std::vector<double> channel(n);
    double power = 0.0;
    for (size_t i = 0; i < n; ++i) {
      channel[i] = ya[i] + config.unattended_gain * yu[i];
      power += channel[i] * channel[i];
    }
    if (config.noise_gain != 0.0 && n > 0) {
      const std::vector<double> pink = PinkNoise(rng, n);
      double pink_power = 0.0;
      for (double p : pink) pink_power += p * p;
      const double gain = pink_power > 0.0
                              ? config.noise_gain * std::sqrt(power / pink_power)
                              : 0.0;
      for (size_t i = 0; i < n; ++i) channel[i] += gain * pink[i];
    }
    const std::vector<double> filtered = FilterCentered(channel, band);
    for (size_t i = 0; i < n; ++i) eeg.values(k, static_cast<Eigen::Index>(i)) = filtered[i];
  }
  return eeg;
}

AttentionStreams AssembleAttention(std::span<const double> env1,
                                   std::span<const double> env2,
                                   const std::vector<int>& labels,
                                   Eigen::Index frame_samples) {
  if (env1.size() != env2.size()) throw ParameterError("envelopes differ in length");
  if (labels.empty() || frame_samples < 1) {
    throw ParameterError("attention labels and a positive frame length are required");
  }
  AttentionStreams out;
  out.attended.resize(env1.size());
  out.unattended.resize(env1.size());
  for (size_t i = 0; i < env1.size(); ++i) {
    const size_t f = std::min(i / static_cast<size_t>(frame_samples), labels.size() - 1);
    if (labels[f] != 1 && labels[f] != 2) throw ParameterError("attention labels must be 1 or 2");
    const bool first = labels[f] == 1;
    out.attended[i] = first ? env1[i] : env2[i];
    out.unattended[i] = first ? env2[i] : env1[i];
  }
  return out;
}

EegRecording SimulateEeg(std::span<const double> env1, std::span<const double> env2,
                         double rate_hz, const std::vector<int>& labels,
                         double frame_len_s, const EegSimulatorConfig& config) {
  const AttentionStreams streams =
      AssembleAttention(env1, env2, labels, FrameSamples(frame_len_s, rate_hz));
  EegRecording eeg = SimulateEeg(streams.attended, streams.unattended, rate_hz, config);
  eeg.attended_label = labels;
  return eeg;
}

}  // namespace neurosteer
