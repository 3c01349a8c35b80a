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

#include "neurosteer/stft.h"

#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "neurosteer/errors.h"

namespace neurosteer {

std::vector<double> SqrtHannWindow(int fft_len) {
  std::vector<double> w(fft_len);
  for (int n = 0; n < fft_len; ++n) {
    w[n] = std::sin(std::numbers::pi * n / fft_len);
  }
  return w;
}

StftFrames Stft(const ChannelMatrix& signal, double rate_hz, int fft_len,
                int hop) {
  if (fft_len < 2 || (fft_len & (fft_len - 1)) != 0) {
    throw ParameterError("fft length must be a power of two");
  }
  if (hop <= 0 || fft_len % hop != 0 || fft_len / hop < 2) {
    throw ParameterError("hop must divide fft length with at least 2x overlap");
  }
  if (signal.cols() < fft_len) {
    throw ParameterError("signal shorter than the fft length");
  }
  StftFrames out;
  out.fft_len = fft_len;
  out.hop = hop;
  out.rate_hz = rate_hz;
  out.window = SqrtHannWindow(fft_len);
  const int num_frames = static_cast<int>((signal.cols() - fft_len) / hop) + 1;
  const int bins = fft_len / 2 + 1;

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(fft_len);
  std::vector<std::complex<double>> spec;
  out.data.reserve(signal.rows());
  for (Eigen::Index c = 0; c < signal.rows(); ++c) {
    Eigen::MatrixXcd m(num_frames, bins);
    const double* x = signal.row(c).data();
    for (int f = 0; f < num_frames; ++f) {
      const double* seg = x + static_cast<Eigen::Index>(f) * hop;
      for (int n = 0; n < fft_len; ++n) frame[n] = seg[n] * out.window[n];
      fft.fwd(spec, frame);
      for (int b = 0; b < bins; ++b) m(f, b) = spec[b];
    }
    out.data.push_back(std::move(m));
  }
  return out;
}

StftFrames Stft(const AudioBuffer& buffer, int fft_len, int hop) {
  return Stft(buffer.samples, buffer.rate_hz, fft_len, hop);
}

AudioBuffer WolaSynthesize(const StftFrames& frames) {
  const int n = frames.fft_len;
  const int hop = frames.hop;
  const int num_frames = frames.frames();
  AudioBuffer out;
  out.rate_hz = frames.rate_hz;
  if (num_frames == 0) {
    out.samples.resize(frames.channels(), 0);
    return out;
  }
  const Eigen::Index length = static_cast<Eigen::Index>(num_frames - 1) * hop + n;
  out.samples = ChannelMatrix::Zero(frames.channels(), length);
  // Sum over overlapping frames of w^2 equals n / (2 hop) for sin windows.
  const double norm = 2.0 * hop / n;

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> spec(frames.bins());
  std::vector<double> time;
  for (int c = 0; c < frames.channels(); ++c) {
    double* y = out.samples.row(c).data();
    const Eigen::MatrixXcd& m = frames.data[c];
    for (int f = 0; f < num_frames; ++f) {
      for (int b = 0; b < frames.bins(); ++b) spec[b] = m(f, b);
      fft.inv(time, spec, n);
      double* seg = y + static_cast<Eigen::Index>(f) * hop;
      for (int k = 0; k < n; ++k) seg[k] += time[k] * frames.window[k] * norm;
    }
  }
  return out;
}

}  // namespace neurosteer
