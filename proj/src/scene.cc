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

#include "neurosteer/scene.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "neurosteer/dsp.h"
#include "neurosteer/errors.h"
#include "neurosteer/rng.h"

namespace neurosteer {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCarrierCutoffHz = 800.0;

}  // namespace

void SceneConfig::Validate() const {
  if (!(noise_power_ratio >= 0.0)) {
    throw ConfigError("noise power ratio must be non-negative");
  }
  if (!(rate_hz > 0.0)) throw ConfigError("scene rate must be positive");
  if (attended_index != 1 && attended_index != 2) {
    throw ConfigError("attended speaker index must be 1 or 2");
  }
  for (int a : speaker_angles_deg) {
    if (a < -180 || a > 180) throw ConfigError("speaker angle out of range");
  }
}

std::vector<int> DefaultNoiseAngles() { return {-90, -45, 0, 45, 90}; }

const std::vector<SpeakerPreset>& SpeakerPresets() {
  static const std::vector<SpeakerPreset> presets = {
      {"pm90", -90, 90},     {"pm75", -75, 75},     {"m90_p30", -90, 30},
      {"pm60", -60, 60},     {"m90_0", -90, 0},     {"pm45", -45, 45},
      {"m90_m30", -90, -30}, {"m60_0", -60, 0},     {"pm30", -30, 30},
      {"m90_m60", -90, -60}, {"m60_m30", -60, -30}, {"pm15", -15, 15},
  };
  return presets;
}

const SpeakerPreset& FindPreset(const std::string& name) {
  for (const SpeakerPreset& p : SpeakerPresets()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown speaker preset '" + name + "'");
}

AudioBuffer NormalizeSpeechPair(const AudioBuffer& speech1,
                                const AudioBuffer& speech2,
                                double* speech_power) {
  if (speech1.channels() != 1 || speech2.channels() != 1) {
    throw ParameterError("speech inputs must be mono");
  }
  if (speech1.rate_hz != speech2.rate_hz) {
    throw ParameterError("speech inputs have different sample rates");
  }
  const Eigen::Index len = std::min(speech1.length(), speech2.length());
  if (len == 0) throw ParameterError("speech inputs must be non-empty");

  AudioBuffer out;
  out.rate_hz = speech1.rate_hz;
  out.samples.resize(2, len);
  out.samples.row(0) = speech1.samples.row(0).head(len);
  out.samples.row(1) = speech2.samples.row(0).head(len);

  double powers[2];
  double total = 0.0;
  int active = 0;
  for (int c = 0; c < 2; ++c) {
    powers[c] = out.samples.row(c).squaredNorm() / static_cast<double>(len);
    if (powers[c] > 0.0) {
      total += powers[c];
      ++active;
    }
  }
  const double target = active > 0 ? total / active : 0.0;
  for (int c = 0; c < 2; ++c) {
    if (powers[c] > 0.0) out.samples.row(c) *= std::sqrt(target / powers[c]);
  }
  if (speech_power != nullptr) *speech_power = target;
  return out;
}

ChannelMatrix Spatialize(std::span<const double> source, const ChannelMatrix& irs) {
  ChannelMatrix out(irs.rows(), static_cast<Eigen::Index>(source.size()));
  for (Eigen::Index m = 0; m < irs.rows(); ++m) {
    const std::vector<double> y = Convolve(source, RowSpan(irs, m));
    std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(source.size()),
              out.row(m).data());
  }
  return out;
}

AudioBuffer SynthesizeScene(const AudioBuffer& speech1,
                            const AudioBuffer& speech2,
                            const std::vector<AudioBuffer>& noise,
                            const HrirSet& hrirs, const SceneConfig& config,
                            bool keep_stems) {
  config.Validate();
  if (hrirs.rate_hz != config.rate_hz || speech1.rate_hz != config.rate_hz) {
    throw ParameterError("speech, HRIRs and scene must share one sample rate");
  }
  if (noise.size() != config.noise_angles_deg.size()) {
    throw ConfigError("noise source count does not match the noise angles");
  }
  const ChannelMatrix& ir1 = hrirs.At(config.speaker_angles_deg[0]);
  const ChannelMatrix& ir2 = hrirs.At(config.speaker_angles_deg[1]);
  for (int angle : config.noise_angles_deg) hrirs.At(angle);

  double speech_power = 0.0;
  const AudioBuffer dry = NormalizeSpeechPair(speech1, speech2, &speech_power);
  const Eigen::Index len = dry.length();

  AudioBuffer out;
  out.rate_hz = config.rate_hz;
  out.samples = ChannelMatrix::Zero(hrirs.mics, len);
  // Adds one spatialized source to the mixture, and to `stem` if given.
  auto add = [&](std::span<const double> source, const ChannelMatrix& irs,
                 ChannelMatrix* stem) {
    for (Eigen::Index m = 0; m < irs.rows(); ++m) {
      const std::vector<double> y = Convolve(source, RowSpan(irs, m));
      const Eigen::Map<const Eigen::RowVectorXd> row(y.data(), len);
      out.samples.row(m) += row;
      if (stem != nullptr) stem->row(m) += row;
    }
  };
  auto new_stem = [&](const char* label) -> ChannelMatrix* {
    if (!keep_stems) return nullptr;
    ChannelMatrix& stem = out.stems[label];
    stem = ChannelMatrix::Zero(hrirs.mics, len);
    return &stem;
  };
  add(RowSpan(dry.samples, 0), ir1, new_stem(kSpeech1Stem));
  add(RowSpan(dry.samples, 1), ir2, new_stem(kSpeech2Stem));
  ChannelMatrix* noise_stem = noise.empty() ? nullptr : new_stem(kNoiseStem);
  for (size_t k = 0; k < noise.size(); ++k) {
    const AudioBuffer& src = noise[k];
    if (src.channels() != 1 || src.rate_hz != config.rate_hz) {
      throw ParameterError("noise sources must be mono at the scene rate");
    }
    if (src.length() < len) {
      throw ParameterError("noise source shorter than the speech inputs");
    }
    std::vector<double> scaled(src.samples.row(0).data(),
                               src.samples.row(0).data() + len);
    const double power = MeanPower(scaled);
    if (power <= 0.0) continue;
    const double gain = std::sqrt(config.noise_power_ratio * speech_power / power);
    for (double& s : scaled) s *= gain;
    add(scaled, hrirs.At(config.noise_angles_deg[k]), noise_stem);
  }
  return out;
}

std::vector<double> GenerateSpeechLike(double duration_s, double rate_hz,
                                       uint64_t seed, double envelope_rate_hz) {
  if (!(duration_s > 0.0) || !(rate_hz > 0.0) || !(envelope_rate_hz > 0.0)) {
    throw ParameterError("speech generator needs positive duration and rates");
  }
  Rng rng(seed);
  const auto n = static_cast<size_t>(std::llround(duration_s * rate_hz));
  const double frame = rate_hz / envelope_rate_hz;

  // Piecewise envelope at audio rate.
  std::vector<double> env(n, 0.0);
  size_t pos = 0;
  while (pos < n) {
    const int frames = rng.UniformInt(2, 8);
    const auto seg_len = static_cast<size_t>(std::llround(frames * frame));
    const bool silent = rng.Uniform() < 0.5;
    const double level = rng.Uniform(0.3, 1.0);
    if (!silent) {
      for (size_t i = 0; i < seg_len && pos + i < n; ++i) {
        env[pos + i] = level * std::sin(kPi * (i + 0.5) / seg_len);
      }
    }
    pos += seg_len;
  }
  // ~12 ms Hann smoothing removes the segment edges.
  int smooth = static_cast<int>(rate_hz / 80.0) | 1;
  std::vector<double> hann(smooth);
  double hsum = 0.0;
  for (int i = 0; i < smooth; ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * (i + 1) / (smooth + 1));
    hsum += hann[i];
  }
  for (double& h : hann) h /= hsum;
  env = FilterCentered(env, hann);

  const double pole = std::exp(-2.0 * kPi * kCarrierCutoffHz / rate_hz);
  double state = 0.0;
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    state = (1.0 - pole) * rng.Normal() + pole * state;
    out[i] = std::max(env[i], 0.0) * state;
  }
  const double power = MeanPower(out);
  if (power > 0.0) {
    const double g = 1.0 / std::sqrt(power);
    for (double& s : out) s *= g;
  }
  return out;
}

std::vector<double> FitSpectralShape(
    const std::vector<std::span<const double>>& signals, int num_taps) {
  constexpr int kFft = 512;
  constexpr int kHop = 256;
  const int bins = kFft / 2 + 1;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> psd(bins, 0.0);
  std::vector<double> frame(kFft);
  std::vector<std::complex<double>> spec;
  size_t count = 0;
  for (std::span<const double> x : signals) {
    for (size_t start = 0; start + kFft <= x.size(); start += kHop) {
      for (int i = 0; i < kFft; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * i / kFft);
        frame[i] = x[start + i] * w;
      }
      fft.fwd(spec, frame);
      for (int b = 0; b < bins; ++b) psd[b] += std::norm(spec[b]);
      ++count;
    }
  }
  if (count == 0) throw ParameterError("signals too short for spectral fit");

  // Linear-phase least squares on the bin grid: real and imaginary parts of
  // H(w) - D(w) exp(-j w (L-1)/2).
  const double delay = (num_taps - 1) / 2.0;
  Eigen::MatrixXd a(2 * bins, num_taps);
  Eigen::VectorXd target(2 * bins);
  for (int b = 0; b < bins; ++b) {
    const double w = kPi * b / (bins - 1);
    const double mag = std::sqrt(psd[b] / static_cast<double>(count));
    for (int n = 0; n < num_taps; ++n) {
      a(2 * b, n) = std::cos(w * n);
      a(2 * b + 1, n) = -std::sin(w * n);
    }
    target(2 * b) = mag * std::cos(w * delay);
    target(2 * b + 1) = -mag * std::sin(w * delay);
  }
  const Eigen::VectorXd h = a.colPivHouseholderQr().solve(target);
  const double norm = h.norm();
  if (!(norm > 0.0)) throw ParameterError("signals have no spectral energy");
  std::vector<double> taps(num_taps);
  for (int n = 0; n < num_taps; ++n) taps[n] = h(n) / norm;
  return taps;
}

std::vector<std::vector<double>> SpeechShapedNoise(
    const std::vector<std::span<const double>>& speech, int count,
    size_t length, uint64_t seed) {
  const std::vector<double> shape = FitSpectralShape(speech);
  std::vector<std::vector<double>> out;
  for (int k = 0; k < count; ++k) {
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(k)));
    std::vector<double> white(length + shape.size());
    for (double& w : white) w = rng.Normal();
    std::vector<double> y = Convolve(white, shape);
    std::vector<double> seg(y.begin() + static_cast<std::ptrdiff_t>(shape.size()),
                            y.begin() + static_cast<std::ptrdiff_t>(shape.size() + length));
    const double power = MeanPower(seg);
    const double g = power > 0.0 ? 1.0 / std::sqrt(power) : 0.0;
    for (double& s : seg) s *= g;
    out.push_back(std::move(seg));
  }
  return out;
}

}  // namespace neurosteer
