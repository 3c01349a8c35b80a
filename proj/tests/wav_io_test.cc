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

#include "neurosteer/wav_io.h"

#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"
#include "neurosteer/errors.h"
#include "neurosteer/rng.h"
#include "test_util.h"

namespace neurosteer {
namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          (std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) +
           "_" + name))
      .string();
}

TEST(Wav, Float32RoundTripIsExactForFloatValues) {
  Rng rng(21);
  AudioBuffer b;
  b.rate_hz = 16000.0;
  b.samples = testing::RandomMatrix(rng, 3, 500).cast<float>().cast<double>() * 0.1;
  b.samples = b.samples.cast<float>().cast<double>();
  const std::string path = TempPath("f32.wav");
  WriteWav(path, b);
  const AudioBuffer r = ReadWav(path);
  EXPECT_EQ(r.rate_hz, 16000.0);
  ASSERT_EQ(r.channels(), 3);
  ASSERT_EQ(r.length(), 500);
  EXPECT_EQ(r.samples, b.samples);
  std::filesystem::remove(path);
}

TEST(Wav, Pcm16RoundTripWithinQuantization) {
  Rng rng(22);
  AudioBuffer b;
  b.rate_hz = 8000.0;
  b.samples = testing::RandomMatrix(rng, 2, 300) * 0.2;
  const std::string path = TempPath("pcm.wav");
  WriteWav(path, b, WavEncoding::kPcm16);
  const AudioBuffer r = ReadWav(path);
  EXPECT_LT((r.samples - b.samples).cwiseAbs().maxCoeff(), 1.0 / 32768.0 + 1e-12);
  std::filesystem::remove(path);
}

TEST(Wav, MissingFileIsIoError) {
  EXPECT_THROW(ReadWav("/nonexistent/definitely/missing.wav"), IoError);
}

TEST(Wav, GarbageIsIoError) {
  const std::string path = TempPath("garbage.wav");
  std::ofstream(path) << "this is not a wave file at all";
  EXPECT_THROW(ReadWav(path), IoError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace neurosteer
