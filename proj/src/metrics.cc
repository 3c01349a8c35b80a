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

#include "neurosteer/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "neurosteer/errors.h"
#include "neurosteer/stats.h"

namespace neurosteer {
namespace {

SnrValue RatioDb(double target, double interference, const char* zero_flag) {
  SnrValue v;
  if (!(interference > 0.0)) {
    v.flag = target > 0.0 ? zero_flag : kFlagSilentOutput;
  } else if (!(target > 0.0)) {
    v.flag = kFlagSilentTarget;
  } else {
    v.db = 10.0 * std::log10(target / interference);
  }
  return v;
}

}  // namespace

DeltaR DeltaRHl(const ChannelMatrix& candidates, const ChannelMatrix& clean) {
  if (candidates.rows() < 2) throw ParameterError("delta r needs at least two candidates");
  if (candidates.cols() != clean.cols()) {
    throw ParameterError("candidate and clean envelopes differ in length");
  }
  DeltaR out;
  for (Eigen::Index s = 0; s < clean.rows(); ++s) {
    std::vector<double> r;
    for (Eigen::Index c = 0; c < candidates.rows(); ++c) {
      r.push_back(Pearson(RowSpan(candidates, c), RowSpan(clean, s)));
    }
    const auto best = std::max_element(r.begin(), r.end()) - r.begin();
    double low = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < r.size(); ++c) {
      if (static_cast<std::ptrdiff_t>(c) != best) low = std::min(low, r[c]);
    }
    out.per_source.push_back(r[best] - low);
    out.best_candidate.push_back(static_cast<int>(best));
  }
  double acc = 0.0;
  for (double d : out.per_source) acc += d;
  out.mean = out.per_source.empty() ? 0.0 : acc / out.per_source.size();
  return out;
}

std::vector<SnrValue> ChannelSnrs(const AudioBuffer& buffer,
                                  const std::string& attended) {
  if (!buffer.stems.contains(attended)) {
    throw ParameterError("stem '" + attended + "' is missing");
  }
  if (buffer.stems.size() < 2) throw ParameterError("interference stems are missing");
  const ChannelMatrix& target = buffer.stems.at(attended);
  ChannelMatrix interference = ChannelMatrix::Zero(target.rows(), target.cols());
  for (const auto& [label, stem] : buffer.stems) {
    if (label != attended) interference += stem;
  }
  std::vector<SnrValue> out;
  for (Eigen::Index c = 0; c < target.rows(); ++c) {
    out.push_back(RatioDb(target.row(c).squaredNorm(),
                          interference.row(c).squaredNorm(), kFlagCleanInput));
  }
  return out;
}

SnrValue SnrIn(const AudioBuffer& mics, const std::string& attended) {
  const std::vector<SnrValue> per_mic = ChannelSnrs(mics, attended);
  SnrValue best;
  for (const SnrValue& v : per_mic) {
    if (v.flag == kFlagCleanInput) return v;
    if (v.ok() && (!best.ok() || *v.db > *best.db)) best = v;
  }
  if (!best.ok() && !per_mic.empty()) return per_mic.front();
  return best;
}

SnrValue SnrOfFiltered(const AudioBuffer& filtered, const std::string& attended) {
  const std::vector<SnrValue> v = ChannelSnrs(filtered, attended);
  if (v.size() != 1) throw ParameterError("filtered output must be mono");
  SnrValue out = v.front();
  if (out.flag == kFlagCleanInput) out.flag = kFlagSilentOutput;
  return out;
}

SnrValue SnrOut(const AudioBuffer& mics, const SpectralFilterBank& bank,
                const std::string& attended, int fft_len, int hop) {
  if (!mics.has_stems()) throw ParameterError("stems are required for output SNR");
  return SnrOfFiltered(ApplyMwf(mics, bank, fft_len, hop), attended);
}

std::vector<CandidateAssociation> AssociateCandidates(
    std::span<const double> cand1, std::span<const double> cand2,
    std::span<const double> clean1, std::span<const double> clean2,
    const std::vector<FrameRange>& frames) {
  const size_t n = cand1.size();
  if (cand2.size() != n || clean1.size() != n || clean2.size() != n) {
    throw ParameterError("candidate and clean envelopes differ in length");
  }
  std::vector<CandidateAssociation> out;
  for (const FrameRange& f : frames) {
    if (f.begin < 0 || static_cast<size_t>(f.end) > n) {
      throw ParameterError("association frame outside the envelopes");
    }
    const auto len = static_cast<size_t>(f.size());
    const auto c1 = clean1.subspan(f.begin, len);
    const auto c2 = clean2.subspan(f.begin, len);
    CandidateAssociation a;
    const std::span<const double> cands[2] = {cand1.subspan(f.begin, len),
                                              cand2.subspan(f.begin, len)};
    for (int c = 0; c < 2; ++c) {
      const double r1 = Pearson(cands[c], c1);
      const double r2 = Pearson(cands[c], c2);
      a.speaker[c] = r1 >= r2 ? 1 : 2;
      a.margin[c] = std::abs(r1 - r2);
    }
    out.push_back(a);
  }
  return out;
}

AccuracyReport AadAccuracy(const std::vector<AadDecision>& decisions,
                           const std::vector<CandidateAssociation>& association,
                           const std::vector<int>& attended_labels) {
  AccuracyReport report;
  if (decisions.empty()) return report;
  int correct = 0;
  for (const AadDecision& d : decisions) {
    const auto f = static_cast<size_t>(d.frame_index);
    if (f >= association.size() || f >= attended_labels.size()) {
      throw ParameterError("decision frame without association or label");
    }
    const CandidateAssociation& a = association[f];
    const int idx = d.chosen - 1;
    if (a.speaker[idx] == attended_labels[f]) ++correct;
    report.margins.push_back(a.margin[idx]);
    report.ambiguous.push_back(a.margin[idx] < kAmbiguousMargin);
  }
  report.accuracy = static_cast<double>(correct) / decisions.size();
  return report;
}

}  // namespace neurosteer
