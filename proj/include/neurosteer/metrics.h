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

#ifndef NEUROSTEER_METRICS_H_
#define NEUROSTEER_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neurosteer/aad.h"
#include "neurosteer/audio_buffer.h"
#include "neurosteer/mwf.h"

namespace neurosteer {

inline constexpr double kAmbiguousMargin = 0.05;

struct DeltaR {
  // Per clean source: r_H - r_L, and the candidate that attained r_H.
  std::vector<double> per_source;
  std::vector<int> best_candidate;
  double mean = 0.0;
};

// For each clean envelope, r_H is the highest Pearson correlation over the
// candidate rows and r_L the lowest over the remaining candidates. With all
// microphone envelopes as candidates this selects the best microphone pair.
// Throws ParameterError for fewer than two candidates or a length mismatch.
DeltaR DeltaRHl(const ChannelMatrix& candidates, const ChannelMatrix& clean);

// Decibel value or a flag explaining why the ratio is undefined.
struct SnrValue {
  std::optional<double> db;
  std::string flag;

  bool ok() const { return db.has_value(); }
};

inline constexpr char kFlagCleanInput[] = "clean input";
inline constexpr char kFlagSilentOutput[] = "silent output";
inline constexpr char kFlagSilentTarget[] = "silent target";

// Energy of the `attended` stem over the energy of all other stems, per
// channel, full length. Throws ParameterError when stems are missing.
std::vector<SnrValue> ChannelSnrs(const AudioBuffer& buffer,
                                  const std::string& attended);

// Best-microphone input SNR.
SnrValue SnrIn(const AudioBuffer& mics, const std::string& attended);

// SNR at the filter output; `filtered` is the mono result of ApplyMwf with
// stems.
SnrValue SnrOfFiltered(const AudioBuffer& filtered, const std::string& attended);
SnrValue SnrOut(const AudioBuffer& mics, const SpectralFilterBank& bank,
                const std::string& attended, int fft_len = kDefaultFftLen,
                int hop = kDefaultHop);

// Which speaker (1 or 2) each candidate stands for within one frame: the
// clean envelope it correlates with more (ties to 1). `margin` is the
// absolute correlation difference.
struct CandidateAssociation {
  int speaker[2] = {1, 2};
  double margin[2] = {0.0, 0.0};
};

std::vector<CandidateAssociation> AssociateCandidates(
    std::span<const double> cand1, std::span<const double> cand2,
    std::span<const double> clean1, std::span<const double> clean2,
    const std::vector<FrameRange>& frames);

struct AccuracyReport {
  double accuracy = 0.0;
  // Association margin of the chosen candidate, per decision.
  std::vector<double> margins;
  std::vector<bool> ambiguous;
};

// Fraction of decisions whose chosen candidate is associated with the
// attended speaker `attended_labels[frame_index]`.
AccuracyReport AadAccuracy(const std::vector<AadDecision>& decisions,
                           const std::vector<CandidateAssociation>& association,
                           const std::vector<int>& attended_labels);

}  // namespace neurosteer

#endif  // NEUROSTEER_METRICS_H_
