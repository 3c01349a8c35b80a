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

#ifndef NEUROSTEER_AAD_H_
#define NEUROSTEER_AAD_H_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "neurosteer/audio_buffer.h"

namespace neurosteer {

inline constexpr int kDefaultTauMax = 5;
inline constexpr double kDefaultAadFrameS = 30.0;

// EEG at the envelope rate, kappa x samples. `attended_label` holds the
// attended speaker (1 or 2) per AAD frame when known.
struct EegRecording {
  double rate_hz = 20.0;
  ChannelMatrix values;
  std::vector<int> attended_label;

  int kappa() const { return static_cast<int>(values.rows()); }
  Eigen::Index length() const { return values.cols(); }
};

// Spatio-temporal weights stacked channel-major, lag-minor.
struct Decoder {
  int kappa = 0;
  int tau_max = kDefaultTauMax;
  Eigen::VectorXd weights;
};

struct AadDecision {
  int frame_index = 0;
  // Candidate (1 or 2) with the higher correlation; ties go to 1.
  int chosen = 1;
  // Correlation of the reconstruction with the chosen and the other candidate.
  double r_a = 0.0;
  double r_u = 0.0;

  // Correlation with candidate 1 or 2.
  double r_candidate(int c) const { return c == chosen ? r_a : r_u; }
};

// Half-open sample interval [begin, end).
struct FrameRange {
  Eigen::Index begin = 0;
  Eigen::Index end = 0;
  Eigen::Index size() const { return end - begin; }
};

// Frame length in samples for a duration at the envelope rate.
Eigen::Index FrameSamples(double frame_len_s, double rate_hz);

// floor(length / frame_samples) consecutive frames. The last frame is trimmed
// so that every row keeps tau_max samples of look-ahead.
std::vector<FrameRange> MakeFrames(Eigen::Index length, Eigen::Index frame_samples,
                                   int tau_max);

// Row n - range.begin holds r_k[n + tau] for k = 0..kappa-1, tau = 0..tau_max,
// channel-major. Throws ParameterError when range.end + tau_max exceeds the
// recording.
Eigen::MatrixXd BuildLagMatrix(const EegRecording& eeg, int tau_max,
                               FrameRange range);

// Least-squares decoder from normal equations accumulated over `frames`.
// Throws NumericalError (with the condition estimate) when R^T R is singular.
Decoder TrainDecoder(const EegRecording& eeg, std::span<const double> attended_env,
                     const std::vector<FrameRange>& frames,
                     int tau_max = kDefaultTauMax);

// Reconstructed envelope R d over one range.
Eigen::VectorXd Reconstruct(const EegRecording& eeg, const Decoder& decoder,
                            FrameRange range);

AadDecision Decide(int frame_index, std::span<const double> reconstruction,
                   std::span<const double> cand1, std::span<const double> cand2);

std::vector<AadDecision> DetectAttention(const EegRecording& eeg,
                                         const Decoder& decoder,
                                         std::span<const double> cand1,
                                         std::span<const double> cand2,
                                         const std::vector<FrameRange>& frames);
std::vector<AadDecision> DetectAttention(const EegRecording& eeg,
                                         const Decoder& decoder,
                                         std::span<const double> cand1,
                                         std::span<const double> cand2,
                                         double frame_len_s = kDefaultAadFrameS);

struct CrossValidation {
  double accuracy = 0.0;
  std::vector<AadDecision> decisions;
};

// Leave-one-frame-out: each frame is decided by a decoder trained on all
// other frames (normal equations downdated by the held-out frame). Accuracy
// compares `chosen` with eeg.attended_label. Needs at least 3 frames.
CrossValidation CrossValidate(const EegRecording& eeg,
                              std::span<const double> attended_env,
                              std::span<const double> cand1,
                              std::span<const double> cand2,
                              double frame_len_s = kDefaultAadFrameS,
                              int tau_max = kDefaultTauMax);

}  // namespace neurosteer

#endif  // NEUROSTEER_AAD_H_
