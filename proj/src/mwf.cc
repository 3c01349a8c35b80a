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

#include "neurosteer/mwf.h"

#include <algorithm>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "neurosteer/errors.h"

namespace neurosteer {
namespace {

Eigen::MatrixXcd Hermitian(const Eigen::MatrixXcd& m) {
  return 0.5 * (m + m.adjoint());
}

ChannelMatrix FilterChannels(const ChannelMatrix& signal, double rate_hz,
                             const SpectralFilterBank& bank, int fft_len, int hop) {
  const Eigen::Index len = signal.cols();
  const Eigen::Index lead = fft_len - hop;
  const Eigen::Index frames = (len + lead + hop - 1) / hop;  // covers len + lead
  const Eigen::Index padded = (frames - 1) * hop + fft_len;
  ChannelMatrix x = ChannelMatrix::Zero(signal.rows(), padded);
  x.middleCols(lead, len) = signal;

  const StftFrames spec = Stft(x, rate_hz, fft_len, hop);
  StftFrames out;
  out.fft_len = fft_len;
  out.hop = hop;
  out.rate_hz = rate_hz;
  out.window = spec.window;
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(spec.frames(), spec.bins());
  for (int b = 0; b < spec.bins(); ++b) {
    for (int m = 0; m < spec.channels(); ++m) {
      y.col(b) += std::conj(bank.weights[b](m)) * spec.data[m].col(b);
    }
  }
  out.data.push_back(std::move(y));
  const AudioBuffer synth = WolaSynthesize(out);
  return synth.samples.middleCols(lead, len);
}

}  // namespace

BinStats EstimateBinStats(const StftFrames& frames,
                          const std::vector<uint8_t>& labels, int min_frames) {
  if (static_cast<int>(labels.size()) != frames.frames()) {
    throw ParameterError("one VAD label per STFT frame is required");
  }
  const int k = frames.channels();
  const int bins = frames.bins();
  BinStats stats;
  stats.r_mm.assign(bins, Eigen::MatrixXcd::Zero(k, k));
  stats.r_vv.assign(bins, Eigen::MatrixXcd::Zero(k, k));
  for (uint8_t l : labels) (l ? stats.speech_frames : stats.noise_frames)++;
  if (stats.speech_frames < min_frames) {
    throw NumericalError("too few speech-active frames for correlation estimates (" +
                         std::to_string(stats.speech_frames) + ")");
  }
  if (stats.noise_frames < min_frames) {
    throw NumericalError("too few noise-only frames for correlation estimates (" +
                         std::to_string(stats.noise_frames) + ")");
  }
  Eigen::VectorXcd m(k);
  for (int b = 0; b < bins; ++b) {
    Eigen::MatrixXcd& r_mm = stats.r_mm[b];
    Eigen::MatrixXcd& r_vv = stats.r_vv[b];
    for (int f = 0; f < frames.frames(); ++f) {
      for (int c = 0; c < k; ++c) m(c) = frames.data[c](f, b);
      if (labels[f]) {
        r_mm.selfadjointView<Eigen::Lower>().rankUpdate(m);
      } else {
        r_vv.selfadjointView<Eigen::Lower>().rankUpdate(m);
      }
    }
    r_mm = Eigen::MatrixXcd(r_mm.selfadjointView<Eigen::Lower>()) / stats.speech_frames;
    r_vv = Eigen::MatrixXcd(r_vv.selfadjointView<Eigen::Lower>()) / stats.noise_frames;
    r_mm = Hermitian(r_mm);
    r_vv = Hermitian(r_vv);
  }
  return stats;
}

SpectralFilterBank SpectralFilterBank::Selector(int bins, int mics, int reference_mic) {
  SpectralFilterBank bank = Zero(bins, mics);
  bank.reference_mic = reference_mic;
  for (auto& w : bank.weights) w(reference_mic) = 1.0;
  return bank;
}

SpectralFilterBank SpectralFilterBank::Zero(int bins, int mics) {
  SpectralFilterBank bank;
  bank.weights.assign(bins, Eigen::VectorXcd::Zero(mics));
  return bank;
}

Rank1Estimate GevdRank1(const Eigen::MatrixXcd& r_mm, const Eigen::MatrixXcd& r_vv,
                        double loading) {
  const Eigen::Index k = r_vv.rows();
  if (r_mm.rows() != k || r_mm.cols() != k || r_vv.cols() != k) {
    throw ParameterError("correlation matrices must be square and equal in size");
  }
  const double load = loading * r_vv.trace().real() / static_cast<double>(k);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(k, k);
  Rank1Estimate est;
  est.r_vv = Hermitian(r_vv) + load * eye;
  const Eigen::MatrixXcd mm = Hermitian(r_mm) + load * eye;

  Eigen::LLT<Eigen::MatrixXcd> llt(est.r_vv);
  if (llt.info() != Eigen::Success || !(load > 0.0)) {
    throw NumericalError("noise correlation matrix is not positive definite");
  }
  const Eigen::MatrixXcd l = llt.matrixL();
  // L^-1 R_mm L^-H
  Eigen::MatrixXcd a = l.triangularView<Eigen::Lower>().solve(mm);
  a = l.triangularView<Eigen::Lower>().solve(a.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(Hermitian(a));
  if (eig.info() != Eigen::Success) {
    throw NumericalError("generalized eigendecomposition failed");
  }
  est.lambda = eig.eigenvalues()(k - 1);
  const Eigen::VectorXcd lu = l * eig.eigenvectors().col(k - 1);
  est.r_xx = std::max(est.lambda - 1.0, 0.0) * (lu * lu.adjoint());
  return est;
}

Eigen::VectorXcd WienerWeights(const Eigen::MatrixXcd& r_xx,
                               const Eigen::MatrixXcd& r_vv, int reference_mic) {
  const Eigen::Index k = r_xx.rows();
  if (reference_mic < 0 || reference_mic >= k) {
    throw ParameterError("reference microphone out of range");
  }
  if (r_xx.isZero(0.0)) return Eigen::VectorXcd::Zero(k);
  return (r_xx + r_vv).llt().solve(r_xx.col(reference_mic));
}

SpectralFilterBank ComputeMwf(const BinStats& stats, int reference_mic) {
  if (reference_mic < 0 || reference_mic >= stats.mics()) {
    throw ParameterError("reference microphone out of range");
  }
  SpectralFilterBank bank;
  bank.reference_mic = reference_mic;
  bank.weights.resize(stats.bins());
  for (int b = 0; b < stats.bins(); ++b) {
    const Rank1Estimate est = GevdRank1(stats.r_mm[b], stats.r_vv[b]);
    bank.weights[b] = WienerWeights(est.r_xx, est.r_vv, reference_mic);
  }
  return bank;
}

AudioBuffer ApplyMwf(const AudioBuffer& mics, const SpectralFilterBank& bank,
                     int fft_len, int hop) {
  if (bank.mics() != mics.channels()) {
    throw ParameterError("filter bank channel count does not match the input");
  }
  if (bank.bins() != fft_len / 2 + 1) {
    throw ParameterError("filter bank bin count does not match the fft length");
  }
  AudioBuffer out;
  out.rate_hz = mics.rate_hz;
  out.samples = FilterChannels(mics.samples, mics.rate_hz, bank, fft_len, hop);
  for (const auto& [label, stem] : mics.stems) {
    out.stems[label] = FilterChannels(stem, mics.rate_hz, bank, fft_len, hop);
  }
  return out;
}

}  // namespace neurosteer
