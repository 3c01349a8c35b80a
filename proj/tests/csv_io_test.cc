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

#include "neurosteer/csv_io.h"

#include <filesystem>
#include <fstream>
#include <limits>

#include "gtest/gtest.h"
#include "neurosteer/errors.h"
#include "neurosteer/rng.h"
#include "test_util.h"

namespace neurosteer {
namespace {

namespace fs = std::filesystem;

class CsvTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("csv_" + std::string(::testing::UnitTest::GetInstance()
                                     ->current_test_info()
                                     ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST(FormatNumber, ShortestRoundTrip) {
  Rng rng(121);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.Normal() * std::pow(10.0, rng.UniformInt(-12, 12));
    EXPECT_EQ(ParseNumber(FormatNumber(v)), v);
  }
  EXPECT_EQ(FormatNumber(0.5), "0.5");
  EXPECT_EQ(FormatNumber(3.0), "3");
  EXPECT_EQ(FormatFixed(1.23456, 2), "1.23");
  EXPECT_THROW(ParseNumber("1.5x"), IoError);
  EXPECT_THROW(ParseNumber(""), IoError);
}

TEST_F(CsvTest, GenericRoundTrip) {
  WriteCsv(Path("t.csv"), {"a", "b"}, {{"1", "x"}, {"2", "y"}});
  const std::vector<CsvRow> rows = ReadCsv(Path("t.csv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (CsvRow{"a", "b"}));
  EXPECT_EQ(rows[2], (CsvRow{"2", "y"}));
  EXPECT_THROW(ReadCsv(Path("missing.csv")), IoError);
}

TEST_F(CsvTest, EnvelopeRoundTrip) {
  Rng rng(122);
  EnvelopeMatrix e;
  e.kind = EnvelopeKind::kAmplitude;
  e.rate_hz = 20.0;
  e.values = testing::RandomMatrix(rng, 3, 50);
  WriteEnvelopeCsv(Path("env.csv"), e);
  const EnvelopeMatrix r = ReadEnvelopeCsv(Path("env.csv"));
  EXPECT_EQ(r.kind, e.kind);
  EXPECT_EQ(r.rate_hz, e.rate_hz);
  EXPECT_EQ(r.values, e.values);
}

TEST_F(CsvTest, EegRoundTrip) {
  Rng rng(123);
  EegRecording eeg;
  eeg.values = testing::RandomMatrix(rng, 5, 40);
  WriteEegCsv(Path("eeg.csv"), eeg);
  const EegRecording r = ReadEegCsv(Path("eeg.csv"));
  EXPECT_EQ(r.rate_hz, 20.0);
  EXPECT_EQ(r.values, eeg.values);
}

TEST_F(CsvTest, LabelsAndDecisionsRoundTrip) {
  WriteLabelsCsv(Path("labels.csv"), {1, 2, 2, 1});
  EXPECT_EQ(ReadLabelsCsv(Path("labels.csv")), (std::vector<int>{1, 2, 2, 1}));
  std::vector<AadDecision> d(2);
  d[0] = {0, 1, 0.25, -0.125};
  d[1] = {1, 2, 0.3333333333333333, 0.1};
  WriteDecisionsCsv(Path("dec.csv"), d);
  const std::vector<AadDecision> r = ReadDecisionsCsv(Path("dec.csv"));
  ASSERT_EQ(r.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(r[i].frame_index, d[i].frame_index);
    EXPECT_EQ(r[i].chosen, d[i].chosen);
    EXPECT_EQ(r[i].r_a, d[i].r_a);
    EXPECT_EQ(r[i].r_u, d[i].r_u);
  }
}

TEST_F(CsvTest, DecoderAndFilterBankRoundTrip) {
  Rng rng(124);
  Decoder d{3, 2, Eigen::Map<const Eigen::VectorXd>(testing::RandomNormal(rng, 9).data(), 9)};
  WriteDecoderCsv(Path("dec.csv"), d);
  const Decoder rd = ReadDecoderCsv(Path("dec.csv"));
  EXPECT_EQ(rd.kappa, 3);
  EXPECT_EQ(rd.tau_max, 2);
  EXPECT_EQ(rd.weights, d.weights);

  SpectralFilterBank bank = SpectralFilterBank::Zero(5, 4);
  bank.reference_mic = 2;
  for (auto& w : bank.weights) w = testing::RandomComplex(rng, 4, 1);
  WriteFilterBankCsv(Path("bank.csv"), bank);
  const SpectralFilterBank rb = ReadFilterBankCsv(Path("bank.csv"));
  ASSERT_EQ(rb.bins(), 5);
  ASSERT_EQ(rb.mics(), 4);
  for (int b = 0; b < 5; ++b) EXPECT_EQ(rb.weights[b], bank.weights[b]);
}

TEST_F(CsvTest, MalformedInputsAreIoErrors) {
  std::ofstream(Path("bad_env.csv")) << "rate_hz,kind\n20,loud\n1,2\n";
  EXPECT_THROW(ReadEnvelopeCsv(Path("bad_env.csv")), Error);
  std::ofstream(Path("bad_labels.csv")) << "frame,label\n0,3\n";
  EXPECT_THROW(ReadLabelsCsv(Path("bad_labels.csv")), IoError);
  std::ofstream(Path("bad_dec.csv")) << "frame,chosen,r_A,r_U\n0,0,0.1,0.2\n";
  EXPECT_THROW(ReadDecisionsCsv(Path("bad_dec.csv")), IoError);
  std::ofstream(Path("no_header.csv")) << "1,2\n";
  EXPECT_THROW(ReadDecisionsCsv(Path("no_header.csv")), IoError);
}

}  // namespace
}  // namespace neurosteer
