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

#ifndef NEUROSTEER_MWF_H_
#define NEUROSTEER_MWF_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "neurosteer/audio_buffer.h"
#include "neurosteer/stft.h"

namespace neurosteer {

inline constexpr int kMinFramesPerClass = 10;
inline constexpr double kMwfLoading = 1e-6;
inline constexpr double kDefaultMwfRateHz = 8000.0;

// Per-bin K x K correlation matrices of the speech-active (label 1) and
// noise-only (label 0) STFT frames.
struct BinStats {
  std::vector<Eigen::MatrixXcd> r_mm;
  std::vector<Eigen::MatrixXcd> r_vv;
  int speech_frames = 0;
  int noise_frames = 0;

  int bins() const { return static_cast<int>(r_mm.size()); }
  int mics() const { return r_mm.empty() ? 0 : static_cast<int>(r_mm[0].rows()); }
};

// Averages M M^H over each class and symmetrizes. `labels` has one entry per
// STFT frame. Throws NumericalError naming the class when it has fewer than
// `min_frames` frames.
BinStats EstimateBinStats(const StftFrames& frames,
                          const std::vector<uint8_t>& labels,
                          int min_frames = kMinFramesPerClass);

// One complex K-vector per bin; the output is W^H M.
struct SpectralFilterBank {
  int reference_mic = 0;
  std::vector<Eigen::VectorXcd> weights;

  int bins() const { return static_cast<int>(weights.size()); }
  int mics() const { return weights.empty() ? 0 : static_cast<int>(weights[0].size()); }

  // W = e_ref in every bin.
  static SpectralFilterBank Selector(int bins, int mics, int reference_mic);
  static SpectralFilterBank Zero(int bins, int mics);
};

struct Rank1Estimate {
  // Principal generalized eigenvalue of (R_mm, R_vv).
  double lambda = 0.0;
  Eigen::MatrixXcd r_xx;
  // R_vv after diagonal loading.
  Eigen::MatrixXcd r_vv;
};

// Both matrices are loaded with loading * tr(R_vv) / K on the diagonal, which
// leaves R_mm - R_vv unchanged. With R_vv = L L^H and (lambda, u) the
// principal eigenpair of L^-1 R_mm L^-H, R_xx = max(lambda - 1, 0) (L u)(L u)^H.
// Throws NumericalError when the loaded R_vv is not positive definite.
Rank1Estimate GevdRank1(const Eigen::MatrixXcd& r_mm, const Eigen::MatrixXcd& r_vv,
                        double loading = kMwfLoading);

// (R_xx + R_vv)^-1 R_xx e_ref.
Eigen::VectorXcd WienerWeights(const Eigen::MatrixXcd& r_xx,
                               const Eigen::MatrixXcd& r_vv, int reference_mic);

// Rank-1 GEVD multi-channel Wiener filter per bin. `reference_mic` is
// 0-based.
SpectralFilterBank ComputeMwf(const BinStats& stats, int reference_mic);

// Filters every channel combination W^H M through STFT / WOLA and returns a
// mono buffer of the input length. Stems are filtered identically. The
// signal is zero-padded so every output sample is covered by full overlap.
AudioBuffer ApplyMwf(const AudioBuffer& mics, const SpectralFilterBank& bank,
                     int fft_len = kDefaultFftLen, int hop = kDefaultHop);

}  // namespace neurosteer

#endif  // NEUROSTEER_MWF_H_
