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

#include "neurosteer/dsp.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>

#include <unsupported/Eigen/FFT>

#include "neurosteer/errors.h"

namespace neurosteer {
namespace {

constexpr double kPi = std::numbers::pi;

double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

// Zeroth-order modified Bessel function of the first kind (power series).
double BesselI0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

size_t NextPow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> ConvolveDirect(std::span<const double> x,
                                   std::span<const double> h) {
  std::vector<double> y(x.size() + h.size() - 1, 0.0);
  for (size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    for (size_t k = 0; k < h.size(); ++k) y[i + k] += xi * h[k];
  }
  return y;
}

std::vector<double> ConvolveFft(std::span<const double> x,
                                std::span<const double> h) {
  const size_t m = h.size();
  const size_t nfft = std::max<size_t>(NextPow2(4 * m), 1024);
  const size_t block = nfft - m + 1;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);

  std::vector<double> padded(nfft, 0.0);
  std::copy(h.begin(), h.end(), padded.begin());
  std::vector<std::complex<double>> kernel_spec;
  fft.fwd(kernel_spec, padded);

  std::vector<double> y(x.size() + m - 1, 0.0);
  std::vector<std::complex<double>> spec;
  std::vector<double> out;
  for (size_t start = 0; start < x.size(); start += block) {
    const size_t len = std::min(block, x.size() - start);
    std::fill(padded.begin(), padded.end(), 0.0);
    std::copy(x.begin() + start, x.begin() + start + len, padded.begin());
    fft.fwd(spec, padded);
    for (size_t b = 0; b < spec.size(); ++b) spec[b] *= kernel_spec[b];
    fft.inv(out, spec);
    const size_t valid = std::min(len + m - 1, y.size() - start);
    for (size_t i = 0; i < valid; ++i) y[start + i] += out[i];
  }
  return y;
}

// Rational approximation L/M of target/rate with integer rates in milli-Hz.
void RationalRatio(double rate_hz, double target_hz, int64_t* up,
                   int64_t* down) {
  const auto a = static_cast<int64_t>(std::llround(target_hz * 1000.0));
  const auto b = static_cast<int64_t>(std::llround(rate_hz * 1000.0));
  const int64_t g = std::gcd(a, b);
  *up = a / g;
  *down = b / g;
}

}  // namespace

std::vector<double> FirBandpassDesign(double low_hz, double high_hz,
                                      double rate_hz, int num_taps) {
  if (!(rate_hz > 0.0) || !(low_hz > 0.0) || !(low_hz < high_hz) ||
      !(high_hz < rate_hz / 2.0)) {
    throw ParameterError("band edges must satisfy 0 < low < high < rate/2");
  }
  if (num_taps < 3 || num_taps % 2 == 0) {
    throw ParameterError("band-pass tap count must be odd and >= 3");
  }
  const double fl = low_hz / rate_hz;
  const double fh = high_hz / rate_hz;
  const double mid = (num_taps - 1) / 2.0;
  std::vector<double> taps(num_taps);
  for (int n = 0; n < num_taps; ++n) {
    const double m = n - mid;
    const double ideal = 2.0 * fh * Sinc(2.0 * fh * m) - 2.0 * fl * Sinc(2.0 * fl * m);
    const double window = 0.54 - 0.46 * std::cos(2.0 * kPi * n / (num_taps - 1));
    taps[n] = ideal * window;
  }
  // Unit gain at the band centre.
  const double f0 = 0.5 * (fl + fh);
  std::complex<double> response = 0.0;
  for (int n = 0; n < num_taps; ++n) {
    response += taps[n] * std::polar(1.0, -2.0 * kPi * f0 * n);
  }
  const double gain = std::abs(response);
  for (double& t : taps) t /= gain;
  return taps;
}

std::vector<double> Convolve(std::span<const double> signal,
                             std::span<const double> kernel) {
  if (signal.empty() || kernel.empty()) {
    throw ParameterError("convolution inputs must be non-empty");
  }
  std::span<const double> x = signal, h = kernel;
  if (h.size() > x.size()) std::swap(x, h);
  if (h.size() <= 64 || x.size() * h.size() < (1u << 20)) {
    return ConvolveDirect(x, h);
  }
  return ConvolveFft(x, h);
}

std::vector<double> FilterCentered(std::span<const double> signal,
                                   std::span<const double> kernel) {
  if (kernel.size() % 2 == 0) {
    throw ParameterError("centred filtering needs an odd-length kernel");
  }
  const std::vector<double> full = Convolve(signal, kernel);
  const size_t delay = (kernel.size() - 1) / 2;
  return {full.begin() + delay, full.begin() + delay + signal.size()};
}

std::vector<double> Resample(std::span<const double> signal, double rate_hz,
                             double target_hz) {
  if (!(target_hz > 0.0) || !(rate_hz > 0.0)) {
    throw ParameterError("resampling rates must be positive");
  }
  int64_t up = 1, down = 1;
  RationalRatio(rate_hz, target_hz, &up, &down);
  if (up == down) return {signal.begin(), signal.end()};

  const auto n_in = static_cast<int64_t>(signal.size());
  const auto n_out = static_cast<int64_t>(
      std::llround(static_cast<double>(n_in) * target_hz / rate_hz));

  // Kaiser-windowed sinc, cutoff at 0.92 of the lower Nyquist, expressed in
  // input-sample units.
  constexpr double kZeroCrossings = 16.0;
  constexpr double kBeta = 7.0;
  const double cutoff =
      0.5 * 0.92 * std::min(1.0, static_cast<double>(up) / down);
  const double half_width = kZeroCrossings / (2.0 * cutoff);
  const auto reach = static_cast<int64_t>(std::ceil(half_width));
  const int64_t taps = 2 * reach + 1;
  const double i0_beta = BesselI0(kBeta);

  // One row of taps per fractional phase p/up; row sums are normalized to 1
  // so DC passes exactly.
  std::vector<double> table(static_cast<size_t>(up * taps));
  for (int64_t p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / up;
    double sum = 0.0;
    for (int64_t k = -reach; k <= reach; ++k) {
      const double x = k - frac;
      double v = 0.0;
      if (std::abs(x) <= half_width) {
        const double r = x / half_width;
        v = 2.0 * cutoff * Sinc(2.0 * cutoff * x) *
            BesselI0(kBeta * std::sqrt(1.0 - r * r)) / i0_beta;
      }
      table[p * taps + (k + reach)] = v;
      sum += v;
    }
    for (int64_t k = 0; k < taps; ++k) table[p * taps + k] /= sum;
  }

  std::vector<double> out(static_cast<size_t>(n_out), 0.0);
  for (int64_t j = 0; j < n_out; ++j) {
    const int64_t pos = j * down;
    const int64_t base = pos / up;
    const int64_t phase = pos % up;
    const double* row = &table[phase * taps];
    const int64_t lo = std::max<int64_t>(0, base - reach);
    const int64_t hi = std::min<int64_t>(n_in - 1, base + reach);
    double acc = 0.0;
    for (int64_t i = lo; i <= hi; ++i) acc += signal[i] * row[i - base + reach];
    out[j] = acc;
  }
  return out;
}

namespace {

ChannelMatrix ResampleMatrix(const ChannelMatrix& m, double rate_hz,
                             double target_hz) {
  ChannelMatrix out;
  for (Eigen::Index c = 0; c < m.rows(); ++c) {
    const std::vector<double> row = Resample(RowSpan(m, c), rate_hz, target_hz);
    if (c == 0) out.resize(m.rows(), static_cast<Eigen::Index>(row.size()));
    out.row(c) = Eigen::Map<const Eigen::RowVectorXd>(
        row.data(), static_cast<Eigen::Index>(row.size()));
  }
  return out;
}

}  // namespace

AudioBuffer Resample(const AudioBuffer& buffer, double target_hz) {
  if (!(target_hz > 0.0)) throw ParameterError("target rate must be positive");
  AudioBuffer out;
  out.rate_hz = target_hz;
  out.samples = ResampleMatrix(buffer.samples, buffer.rate_hz, target_hz);
  for (const auto& [label, stem] : buffer.stems) {
    out.stems[label] = ResampleMatrix(stem, buffer.rate_hz, target_hz);
  }
  return out;
}

AudioBuffer Resample(AudioBuffer&& buffer, double target_hz) {
  if (!(target_hz > 0.0)) throw ParameterError("target rate must be positive");
  AudioBuffer out;
  out.rate_hz = target_hz;
  out.samples = ResampleMatrix(buffer.samples, buffer.rate_hz, target_hz);
  buffer.samples.resize(0, 0);
  for (auto& [label, stem] : buffer.stems) {
    out.stems[label] = ResampleMatrix(stem, buffer.rate_hz, target_hz);
    stem.resize(0, 0);
  }
  buffer.stems.clear();
  return out;
}

}  // namespace neurosteer
