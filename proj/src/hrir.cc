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

#include "neurosteer/hrir.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "neurosteer/dsp.h"
#include "neurosteer/errors.h"
#include "neurosteer/wav_io.h"

namespace neurosteer {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kFracDelayHalfWidth = 16;
constexpr double kLeadSeconds = 1e-3;

double FracDelayTap(double k) {
  if (std::abs(k) > kFracDelayHalfWidth) return 0.0;
  const double sinc = std::abs(k) < 1e-12 ? 1.0 : std::sin(kPi * k) / (kPi * k);
  const double window = 0.5 + 0.5 * std::cos(kPi * k / (kFracDelayHalfWidth + 1));
  return sinc * window;
}

}  // namespace

std::vector<int> HrirSet::angles_deg() const {
  std::vector<int> out;
  for (const auto& [angle, ir] : impulse_responses) out.push_back(angle);
  return out;
}

const ChannelMatrix& HrirSet::At(int angle_deg) const {
  auto it = impulse_responses.find(angle_deg);
  if (it == impulse_responses.end()) {
    throw ConfigError("HRIR set has no response for angle " +
                      std::to_string(angle_deg) + " deg");
  }
  return it->second;
}

void HrirSet::Validate() const {
  if (impulse_responses.empty()) throw ConfigError("HRIR set is empty");
  if (!(rate_hz > 0.0)) throw ConfigError("HRIR rate must be positive");
  for (const auto& [angle, ir] : impulse_responses) {
    if (ir.rows() != mics) {
      throw ConfigError("HRIR at " + std::to_string(angle) +
                        " deg has the wrong microphone count");
    }
  }
}

std::vector<MicPosition> DefaultMicLayout() {
  return {{-1, 0.015}, {-1, 0.0075}, {-1, 0.0},
          {+1, 0.015}, {+1, 0.0075}, {+1, 0.0}};
}

double WoodworthDelay(double angle_deg, int ear) {
  const double theta = angle_deg * kPi / 180.0;
  double phi = std::abs(theta - ear * kPi / 2.0);
  if (phi > kPi) phi = 2.0 * kPi - phi;
  const double scale = kHeadRadiusM / kSpeedOfSoundMps;
  if (phi <= kPi / 2.0) return -scale * std::cos(phi);
  return scale * (phi - kPi / 2.0);
}

ChannelMatrix SynthHrir(double angle_deg, const std::vector<MicPosition>& mics,
                        double rate_hz) {
  const double theta = angle_deg * kPi / 180.0;
  const double s = std::sin(theta);
  const double abs_s = std::abs(s);
  ChannelMatrix irs = ChannelMatrix::Zero(static_cast<Eigen::Index>(mics.size()),
                                          kParametricHrirTaps);
  for (size_t m = 0; m < mics.size(); ++m) {
    const MicPosition& mic = mics[m];
    const double tau = WoodworthDelay(angle_deg, mic.ear) -
                       mic.offset_m * std::cos(theta) / kSpeedOfSoundMps;
    const double delay =
        (tau + kHeadRadiusM / kSpeedOfSoundMps + kLeadSeconds) * rate_hz;
    auto row = irs.row(static_cast<Eigen::Index>(m));
    for (int n = 0; n < kParametricHrirTaps; ++n) row(n) = FracDelayTap(n - delay);

    const bool contralateral = s * mic.ear < 0.0;
    if (contralateral) {
      const double gain = std::pow(10.0, -abs_s * kMaxShadowDb / 20.0);
      const double cutoff = 6000.0 - 4500.0 * abs_s;
      const double pole = std::exp(-2.0 * kPi * std::min(cutoff, 0.49 * rate_hz) / rate_hz);
      double state = 0.0;
      for (int n = 0; n < kParametricHrirTaps; ++n) {
        state = (1.0 - pole) * row(n) + pole * state;
        row(n) = gain * state;
      }
    }
  }
  return irs;
}

HrirSet ParametricHrirSet(const std::vector<int>& angles_deg,
                          const std::vector<MicPosition>& mics, double rate_hz) {
  HrirSet set;
  set.mics = static_cast<int>(mics.size());
  set.rate_hz = rate_hz;
  for (int angle : angles_deg) {
    set.impulse_responses[angle] = SynthHrir(angle, mics, rate_hz);
  }
  return set;
}

HrirSet LoadHrirSet(const std::string& manifest_path, double target_rate_hz) {
  namespace fs = std::filesystem;
  namespace pt = boost::property_tree;
  if (!fs::exists(manifest_path)) {
    throw IoError("HRIR manifest not found: " + manifest_path);
  }
  pt::ptree tree;
  try {
    pt::read_ini(manifest_path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw IoError("cannot parse HRIR manifest " + manifest_path + ": " + e.what());
  }
  const pt::ptree& entries =
      tree.get_child_optional("hrir") ? tree.get_child("hrir") : tree;
  const fs::path base = fs::path(manifest_path).parent_path();

  HrirSet set;
  set.rate_hz = target_rate_hz;
  for (const auto& [key, node] : entries) {
    if (!node.empty()) continue;  // nested section
    int angle = 0;
    try {
      size_t used = 0;
      angle = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw IoError("HRIR manifest key is not an integer angle: '" + key + "'");
    }
    fs::path file = node.data();
    if (file.is_relative()) file = base / file;
    if (!fs::exists(file)) {
      throw IoError("HRIR file for angle " + key + " not found: " + file.string());
    }
    AudioBuffer wav = ReadWav(file.string());
    if (set.mics == 0) set.mics = wav.channels();
    if (wav.channels() != set.mics) {
      throw IoError("HRIR file " + file.string() + " has " +
                    std::to_string(wav.channels()) + " channels, expected " +
                    std::to_string(set.mics));
    }
    // Taps are samples of a continuous response, so a rate change rescales
    // them by the inverse rate ratio.
    AudioBuffer resampled = Resample(wav, target_rate_hz);
    resampled.samples *= wav.rate_hz / target_rate_hz;
    set.impulse_responses[angle] = std::move(resampled.samples);
  }
  if (set.impulse_responses.empty()) {
    throw IoError("HRIR manifest lists no angles: " + manifest_path);
  }
  return set;
}

}  // namespace neurosteer
