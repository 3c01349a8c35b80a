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

#include <cmath>

#include "gtest/gtest.h"
#include "neurosteer/errors.h"
#include "neurosteer/hrir.h"
#include "neurosteer/rng.h"
#include "neurosteer/scene.h"
#include "neurosteer/stft.h"
#include "test_util.h"

namespace neurosteer {
namespace {

Eigen::MatrixXcd RandomHpd(Rng& rng, int k) {
  const Eigen::MatrixXcd a = testing::RandomComplex(rng, k, k);
  return a * a.adjoint() + 0.1 * Eigen::MatrixXcd::Identity(k, k);
}

double HermitianError(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

StftFrames RandomFrames(Rng& rng, int channels, int frames) {
  StftFrames f;
  f.fft_len = 16;
  f.hop = 8;
  f.rate_hz = 8000.0;
  f.window = SqrtHannWindow(16);
  for (int c = 0; c < channels; ++c) f.data.push_back(testing::RandomComplex(rng, frames, 9));
  return f;
}

TEST(EstimateBinStats, SingleFramePerClassIsOuterProduct) {
  Rng rng(81);
  const StftFrames f = RandomFrames(rng, 3, 2);
  const BinStats s = EstimateBinStats(f, {1, 0}, 1);
  EXPECT_EQ(s.speech_frames, 1);
  EXPECT_EQ(s.noise_frames, 1);
  for (int b = 0; b < f.bins(); ++b) {
    Eigen::VectorXcd m0(3), m1(3);
    for (int c = 0; c < 3; ++c) m0(c) = f.data[c](0, b), m1(c) = f.data[c](1, b);
    EXPECT_LT((s.r_mm[b] - m0 * m0.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((s.r_vv[b] - m1 * m1.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(EstimateBinStats, MatchesLoopOracleAndIsHermitian) {
  Rng rng(82);
  const StftFrames f = RandomFrames(rng, 4, 60);
  std::vector<uint8_t> labels(60);
  for (int i = 0; i < 60; ++i) labels[i] = (i * 7) % 3 == 0;
  const BinStats s = EstimateBinStats(f, labels);
  for (int b = 0; b < f.bins(); ++b) {
    Eigen::MatrixXcd mm = Eigen::MatrixXcd::Zero(4, 4), vv = mm;
    int nm = 0, nv = 0;
    for (int t = 0; t < 60; ++t) {
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          const std::complex<double> p = f.data[i](t, b) * std::conj(f.data[j](t, b));
          (labels[t] ? mm : vv)(i, j) += p;
        }
      }
      (labels[t] ? nm : nv)++;
    }
    EXPECT_LT((s.r_mm[b] - mm / nm).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((s.r_vv[b] - vv / nv).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(HermitianError(s.r_mm[b]), 1e-10);
    EXPECT_LT(HermitianError(s.r_vv[b]), 1e-10);
  }
}

TEST(EstimateBinStats, WhiteNoiseIsScaledIdentity) {
  Rng rng(83);
  const double sigma = 0.7;
  const int frames = 4000;
  ChannelMatrix x = testing::RandomMatrix(rng, 3, (frames + 1) * 256) * sigma;
  const StftFrames f = Stft(x, 8000.0, 512, 256);
  std::vector<uint8_t> labels(f.frames());
  for (int i = 0; i < f.frames(); ++i) labels[i] = i % 2;
  const BinStats s = EstimateBinStats(f, labels);
  double window_energy = 0.0;
  for (double w : f.window) window_energy += w * w;
  const double expected = sigma * sigma * window_energy;
  for (int b = 1; b + 1 < f.bins(); b += 16) {
    for (const Eigen::MatrixXcd* r : {&s.r_mm[b], &s.r_vv[b]}) {
      for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR((*r)(i, i).real(), expected, 0.1 * expected) << b;
        for (int j = 0; j < 3; ++j) {
          if (i != j) EXPECT_LT(std::abs((*r)(i, j)), 0.1 * expected) << b;
        }
      }
    }
  }
}

TEST(EstimateBinStats, UnderflowNamesTheClass) {
  Rng rng(84);
  const StftFrames f = RandomFrames(rng, 2, 15);
  std::vector<uint8_t> labels(15, 1);
  labels[0] = 0;
  try {
    EstimateBinStats(f, labels);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("noise"), std::string::npos);
  }
  std::fill(labels.begin(), labels.end(), 0);
  try {
    EstimateBinStats(f, labels);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("speech"), std::string::npos);
  }
  EXPECT_THROW(EstimateBinStats(f, std::vector<uint8_t>(14, 1)), ParameterError);
}

TEST(GevdRank1, NoSpeechGivesZeroFilter) {
  Rng rng(85);
  const Eigen::MatrixXcd r = RandomHpd(rng, 4);
  const Rank1Estimate est = GevdRank1(r, r);
  EXPECT_NEAR(est.lambda, 1.0, 1e-9);
  EXPECT_TRUE(est.r_xx.isZero(0.0));
  EXPECT_TRUE(WienerWeights(est.r_xx, est.r_vv, 0).isZero(0.0));
}

TEST(GevdRank1, RecoversRankOneSpeech) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(86 + seed);
    const int k = 6;
    const Eigen::VectorXcd a = testing::RandomComplex(rng, k, 1);
    const double power = 0.5 + rng.Uniform();
    const Eigen::MatrixXcd r_xx = power * a * a.adjoint();
    const Eigen::MatrixXcd r_vv = RandomHpd(rng, k);
    const Rank1Estimate est = GevdRank1(r_xx + r_vv, r_vv);
    EXPECT_GE(est.lambda, 1.0);
    EXPECT_LT((est.r_xx - r_xx).norm() / r_xx.norm(), 1e-8);
    EXPECT_LT(HermitianError(est.r_xx), 1e-10);
    // Closed form with the true speech correlation and the loaded noise.
    const Eigen::VectorXcd direct =
        (r_xx + est.r_vv).lu().solve(r_xx.col(2));
    const Eigen::VectorXcd w = WienerWeights(est.r_xx, est.r_vv, 2);
    EXPECT_LT((w - direct).norm() / direct.norm(), 1e-8);
  }
}

TEST(GevdRank1, LoadingLeavesDifferenceUnchanged) {
  Rng rng(87);
  const Eigen::MatrixXcd r_vv = RandomHpd(rng, 3);
  const Rank1Estimate est = GevdRank1(r_vv, r_vv, 1e-3);
  const double load = 1e-3 * r_vv.trace().real() / 3.0;
  EXPECT_LT((est.r_vv - r_vv - load * Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(GevdRank1, IndefiniteNoiseIsNumericalError) {
  Eigen::MatrixXcd r_vv = Eigen::MatrixXcd::Identity(2, 2);
  r_vv(1, 1) = -5.0;
  EXPECT_THROW(GevdRank1(Eigen::MatrixXcd::Identity(2, 2), r_vv), NumericalError);
}

TEST(ComputeMwf, JointScalingLeavesWeightsUnchanged) {
  Rng rng(88);
  BinStats stats;
  for (int b = 0; b < 5; ++b) {
    const Eigen::VectorXcd a = testing::RandomComplex(rng, 4, 1);
    const Eigen::MatrixXcd r_vv = RandomHpd(rng, 4);
    stats.r_mm.push_back(a * a.adjoint() + r_vv + 0.01 * RandomHpd(rng, 4));
    stats.r_vv.push_back(r_vv);
  }
  BinStats scaled = stats;
  for (int b = 0; b < 5; ++b) scaled.r_mm[b] *= 42.0, scaled.r_vv[b] *= 42.0;
  const SpectralFilterBank w1 = ComputeMwf(stats, 1);
  const SpectralFilterBank w2 = ComputeMwf(scaled, 1);
  EXPECT_EQ(w1.reference_mic, 1);
  ASSERT_EQ(w1.bins(), 5);
  for (int b = 0; b < 5; ++b) EXPECT_LT((w1.weights[b] - w2.weights[b]).norm(), 1e-10);
}

class ApplyMwfTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const double rate = 8000.0;
    const AudioBuffer s1 = AudioBuffer::Mono(GenerateSpeechLike(4.0, rate, 91), rate);
    const AudioBuffer s2 = AudioBuffer::Mono(GenerateSpeechLike(4.0, rate, 92), rate);
    const auto noise = SpeechShapedNoise({s1.channel(0), s2.channel(0)}, 1,
                                         static_cast<size_t>(s1.length()), 93);
    SceneConfig config;
    config.rate_hz = rate;
    config.noise_angles_deg = {0};
    const HrirSet hrirs = ParametricHrirSet({-90, 0, 90}, DefaultMicLayout(), rate);
    scene_ = new AudioBuffer(SynthesizeScene(
        s1, s2, {AudioBuffer::Mono(noise[0], rate)}, hrirs, config));
  }
  static void TearDownTestSuite() { delete scene_; }
  static AudioBuffer* scene_;
};

AudioBuffer* ApplyMwfTest::scene_ = nullptr;

TEST_F(ApplyMwfTest, SelectorPassesReferenceThrough) {
  for (int ref : {0, 4}) {
    const AudioBuffer out = ApplyMwf(*scene_, SpectralFilterBank::Selector(257, 6, ref));
    ASSERT_EQ(out.channels(), 1);
    ASSERT_EQ(out.length(), scene_->length());
    EXPECT_LT((out.samples.row(0) - scene_->samples.row(ref)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST_F(ApplyMwfTest, ZeroBankIsSilent) {
  const AudioBuffer out = ApplyMwf(*scene_, SpectralFilterBank::Zero(257, 6));
  EXPECT_TRUE(out.samples.isZero(0.0));
}

TEST_F(ApplyMwfTest, LinearOverStems) {
  Rng rng(94);
  SpectralFilterBank bank = SpectralFilterBank::Zero(257, 6);
  for (auto& w : bank.weights) w = testing::RandomComplex(rng, 6, 1);
  const AudioBuffer out = ApplyMwf(*scene_, bank);
  ASSERT_EQ(out.stems.size(), 3u);
  ChannelMatrix sum = ChannelMatrix::Zero(1, out.length());
  for (const auto& [label, stem] : out.stems) sum += stem;
  EXPECT_LT((out.samples - sum).cwiseAbs().maxCoeff(), 1e-8);
  AudioBuffer alone;
  alone.rate_hz = scene_->rate_hz;
  alone.samples = scene_->stem(kSpeech2Stem);
  EXPECT_LT((ApplyMwf(alone, bank).samples - out.stem(kSpeech2Stem)).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST_F(ApplyMwfTest, DimensionMismatchIsError) {
  EXPECT_THROW(ApplyMwf(*scene_, SpectralFilterBank::Selector(257, 4, 0)), ParameterError);
  EXPECT_THROW(ApplyMwf(*scene_, SpectralFilterBank::Selector(129, 6, 0)), ParameterError);
}

}  // namespace
}  // namespace neurosteer
