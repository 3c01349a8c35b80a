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

#include "neurosteer/aad.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "neurosteer/errors.h"
#include "neurosteer/stats.h"

namespace neurosteer {
namespace {

constexpr double kMinRcond = 1e-13;

struct NormalEquations {
  Eigen::MatrixXd gram;
  Eigen::VectorXd rhs;
};

NormalEquations Accumulate(const EegRecording& eeg, std::span<const double> env,
                           int tau_max, FrameRange range) {
  const Eigen::MatrixXd r = BuildLagMatrix(eeg, tau_max, range);
  const Eigen::Map<const Eigen::VectorXd> s(env.data() + range.begin, range.size());
  NormalEquations ne;
  ne.gram = r.transpose() * r;
  ne.rhs = r.transpose() * s;
  return ne;
}

Eigen::VectorXd Solve(const NormalEquations& ne) {
  Eigen::LLT<Eigen::MatrixXd> llt(ne.gram);
  const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  if (!(rcond > kMinRcond)) {
    std::ostringstream msg;
    msg << "decoder normal equations are ill-conditioned (condition estimate "
        << (rcond > 0.0 ? 1.0 / rcond : INFINITY) << ")";
    throw NumericalError(msg.str());
  }
  return llt.solve(ne.rhs);
}

void CheckLength(const EegRecording& eeg, std::span<const double> env,
                 const char* what) {
  if (static_cast<Eigen::Index>(env.size()) != eeg.length()) {
    throw ParameterError(std::string(what) + " length does not match the EEG");
  }
}

}  // namespace

Eigen::Index FrameSamples(double frame_len_s, double rate_hz) {
  const auto n = static_cast<Eigen::Index>(std::llround(frame_len_s * rate_hz));
  if (n < 1) throw ParameterError("AAD frame length must be positive");
  return n;
}

std::vector<FrameRange> MakeFrames(Eigen::Index length, Eigen::Index frame_samples,
                                   int tau_max) {
  if (frame_samples < 1) throw ParameterError("frame length must be positive");
  std::vector<FrameRange> frames;
  const Eigen::Index usable = length - tau_max;
  for (Eigen::Index f = 0; (f + 1) * frame_samples <= length; ++f) {
    const Eigen::Index begin = f * frame_samples;
    frames.push_back({begin, std::max(begin, std::min(begin + frame_samples, usable))});
  }
  return frames;
}

Eigen::MatrixXd BuildLagMatrix(const EegRecording& eeg, int tau_max,
                               FrameRange range) {
  if (tau_max < 0) throw ParameterError("tau_max must be non-negative");
  if (range.begin < 0 || range.end < range.begin ||
      range.end + tau_max > eeg.length()) {
    throw ParameterError("lag matrix range overruns the EEG recording");
  }
  const int lags = tau_max + 1;
  Eigen::MatrixXd r(range.size(), eeg.kappa() * lags);
  for (int k = 0; k < eeg.kappa(); ++k) {
    for (int tau = 0; tau < lags; ++tau) {
      r.col(k * lags + tau) =
          eeg.values.row(k).segment(range.begin + tau, range.size()).transpose();
    }
  }
  return r;
}

Decoder TrainDecoder(const EegRecording& eeg, std::span<const double> attended_env,
                     const std::vector<FrameRange>& frames, int tau_max) {
  CheckLength(eeg, attended_env, "attended envelope");
  if (frames.empty()) throw ParameterError("no training frames");
  const Eigen::Index dim = static_cast<Eigen::Index>(eeg.kappa()) * (tau_max + 1);
  NormalEquations total{Eigen::MatrixXd::Zero(dim, dim), Eigen::VectorXd::Zero(dim)};
  for (const FrameRange& range : frames) {
    const NormalEquations ne = Accumulate(eeg, attended_env, tau_max, range);
    total.gram += ne.gram;
    total.rhs += ne.rhs;
  }
  return Decoder{eeg.kappa(), tau_max, Solve(total)};
}

Eigen::VectorXd Reconstruct(const EegRecording& eeg, const Decoder& decoder,
                            FrameRange range) {
  if (decoder.kappa != eeg.kappa() ||
      decoder.weights.size() != static_cast<Eigen::Index>(decoder.kappa) * (decoder.tau_max + 1)) {
    throw ParameterError("decoder does not match the EEG channel count");
  }
  return BuildLagMatrix(eeg, decoder.tau_max, range) * decoder.weights;
}

AadDecision Decide(int frame_index, std::span<const double> reconstruction,
                   std::span<const double> cand1, std::span<const double> cand2) {
  const double r1 = Pearson(reconstruction, cand1);
  const double r2 = Pearson(reconstruction, cand2);
  AadDecision d;
  d.frame_index = frame_index;
  d.chosen = r1 >= r2 ? 1 : 2;
  d.r_a = d.chosen == 1 ? r1 : r2;
  d.r_u = d.chosen == 1 ? r2 : r1;
  return d;
}

std::vector<AadDecision> DetectAttention(const EegRecording& eeg,
                                         const Decoder& decoder,
                                         std::span<const double> cand1,
                                         std::span<const double> cand2,
                                         const std::vector<FrameRange>& frames) {
  CheckLength(eeg, cand1, "candidate 1");
  CheckLength(eeg, cand2, "candidate 2");
  std::vector<AadDecision> out;
  for (size_t f = 0; f < frames.size(); ++f) {
    const FrameRange& range = frames[f];
    if (range.size() < decoder.tau_max + 2) {
      throw ParameterError("AAD frame shorter than tau_max + 2 samples");
    }
    const Eigen::VectorXd y = Reconstruct(eeg, decoder, range);
    const auto n = static_cast<size_t>(range.size());
    out.push_back(Decide(static_cast<int>(f), {y.data(), n},
                         cand1.subspan(range.begin, n), cand2.subspan(range.begin, n)));
  }
  return out;
}

std::vector<AadDecision> DetectAttention(const EegRecording& eeg,
                                         const Decoder& decoder,
                                         std::span<const double> cand1,
                                         std::span<const double> cand2,
                                         double frame_len_s) {
  const std::vector<FrameRange> frames = MakeFrames(
      eeg.length(), FrameSamples(frame_len_s, eeg.rate_hz), decoder.tau_max);
  if (frames.empty()) throw ParameterError("recording shorter than one AAD frame");
  return DetectAttention(eeg, decoder, cand1, cand2, frames);
}

CrossValidation CrossValidate(const EegRecording& eeg,
                              std::span<const double> attended_env,
                              std::span<const double> cand1,
                              std::span<const double> cand2,
                              double frame_len_s, int tau_max) {
  CheckLength(eeg, attended_env, "attended envelope");
  CheckLength(eeg, cand1, "candidate 1");
  CheckLength(eeg, cand2, "candidate 2");
  const std::vector<FrameRange> frames =
      MakeFrames(eeg.length(), FrameSamples(frame_len_s, eeg.rate_hz), tau_max);
  if (frames.size() < 3) {
    throw ParameterError("cross-validation needs at least 3 frames");
  }
  if (eeg.attended_label.size() < frames.size()) {
    throw ParameterError("EEG recording lacks attended labels for every frame");
  }
  std::vector<NormalEquations> per_frame;
  const Eigen::Index dim = static_cast<Eigen::Index>(eeg.kappa()) * (tau_max + 1);
  NormalEquations total{Eigen::MatrixXd::Zero(dim, dim), Eigen::VectorXd::Zero(dim)};
  for (const FrameRange& range : frames) {
    if (range.size() < tau_max + 2) {
      throw ParameterError("AAD frame shorter than tau_max + 2 samples");
    }
    per_frame.push_back(Accumulate(eeg, attended_env, tau_max, range));
    total.gram += per_frame.back().gram;
    total.rhs += per_frame.back().rhs;
  }

  CrossValidation cv;
  int correct = 0;
  for (size_t f = 0; f < frames.size(); ++f) {
    const NormalEquations held{total.gram - per_frame[f].gram,
                               total.rhs - per_frame[f].rhs};
    const Decoder decoder{eeg.kappa(), tau_max, Solve(held)};
    const Eigen::VectorXd y = Reconstruct(eeg, decoder, frames[f]);
    const auto n = static_cast<size_t>(frames[f].size());
    const AadDecision d =
        Decide(static_cast<int>(f), {y.data(), n}, cand1.subspan(frames[f].begin, n),
               cand2.subspan(frames[f].begin, n));
    if (d.chosen == eeg.attended_label[f]) ++correct;
    cv.decisions.push_back(d);
  }
  cv.accuracy = static_cast<double>(correct) / static_cast<double>(frames.size());
  return cv;
}

}  // namespace neurosteer
