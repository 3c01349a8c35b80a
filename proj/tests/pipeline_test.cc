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

#include "neurosteer/pipeline.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "neurosteer/dsp.h"
#include "neurosteer/errors.h"
#include "neurosteer/metrics.h"
#include "neurosteer/mwf.h"
#include "neurosteer/stft.h"
#include "neurosteer/vad.h"

namespace neurosteer {
namespace {

namespace fs = std::filesystem;

PipelineConfig ShortConfig(const std::string& preset = "pm90") {
  PipelineConfig c;
  c.ApplyPreset(preset);
  c.duration_s = 30.0;
  c.aad_frame_s = 10.0;
  return c;
}

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() /
                     (std::string(::testing::UnitTest::GetInstance()
                                      ->current_test_info()
                                      ->name()) +
                      "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(RunPipeline, OracleAadImprovesSnr) {
  PipelineConfig c = ShortConfig();
  c.oracle_aad = true;
  const EvalReport r = RunPipeline(c);
  ASSERT_TRUE(r.snr_in.ok());
  ASSERT_TRUE(r.snr_out.ok());
  EXPECT_GT(*r.snr_out.db, *r.snr_in.db);
  EXPECT_GT(*r.delta_r_post, *r.delta_r_prior);
  EXPECT_EQ(*r.aad_accuracy, 1.0);
  EXPECT_TRUE(r.error.empty());
}

TEST(RunPipeline, DeterministicArtifacts) {
  const fs::path a = TempDir("a"), b = TempDir("b");
  PipelineConfig c = ShortConfig("pm60");
  c.seed = 7;
  c.out_dir = a.string();
  const EvalReport ra = RunPipeline(c);
  c.out_dir = b.string();
  const EvalReport rb = RunPipeline(c);
  EXPECT_EQ(EvalReportRow(ra), EvalReportRow(rb));
  for (const char* f : {"decisions.csv", "envelopes_mics.csv", "envelopes_clean.csv",
                        "envelopes_candidates.csv", "vad.csv", "report.csv",
                        "enhanced.wav"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(Slurp(a / f), Slurp(b / f)) << f;
  }
  EXPECT_FALSE(fs::exists(a / "FAILED"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(RunPipeline, MissingSpeechFileNamesPath) {
  const fs::path dir = TempDir("out");
  PipelineConfig c = ShortConfig();
  c.speech1_path = "/nonexistent/talker_one.wav";
  c.speech2_path = "/nonexistent/talker_two.wav";
  c.out_dir = dir.string();
  try {
    RunPipeline(c);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("talker_one.wav"), std::string::npos);
  }
  EXPECT_TRUE(fs::exists(dir / "FAILED"));
  fs::remove_all(dir);
}

TEST(RunMatrix, EmptyPresetListGivesNoRows) {
  EXPECT_TRUE(RunMatrix(ShortConfig(), {}).empty());
  EXPECT_EQ(EvalReportHeader().size(), EvalReportRow(EvalReport{}).size());
}

TEST(SweepVad, SingleDefaultAlphaMatchesOracleRun) {
  PipelineConfig c = ShortConfig();
  c.oracle_aad = true;
  const EvalReport run = RunPipeline(c);
  const std::vector<SweepRow> rows = SweepVad(c, {kDemixedVadAlpha});
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_TRUE(rows[0].snr_out.ok());
  EXPECT_EQ(*rows[0].snr_out.db, *run.snr_out.db);
  EXPECT_TRUE(SweepVad(c, {}).empty());
}

TEST(SweepVad, BadAlphaIsReportedPerRow) {
  const std::vector<SweepRow> rows = SweepVad(ShortConfig(), {0.05, 1.5});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].error.empty());
  EXPECT_FALSE(rows[1].error.empty());
}

// Output SNR with an oracle VAD from the dry attended speech never falls
// below the best microphone.
TEST(Enhancement, OracleVadBeatsBestMicrophoneForEveryPreset) {
  for (const SpeakerPreset& p : SpeakerPresets()) {
    const PipelineConfig c = ShortConfig(p.name);
    SceneData scene = BuildScene(c);
    const ChannelMatrix dry_attended = scene.dry.row(c.scene.attended_index - 1);
    const EnvelopeMatrix energy =
        ShortTimeEnergy(dry_attended, scene.mics.rate_hz, c.envelope_rate_hz);
    const VadTrack vad = VadThreshold(energy.channel(0), energy.rate_hz, kDemixedVadAlpha);
    const AudioBuffer mics = Resample(std::move(scene.mics), c.mwf_rate_hz);
    const StftFrames frames = Stft(mics, c.fft_len, c.hop);
    const BinStats stats = EstimateBinStats(
        frames, ExpandVad(vad, c.hop, c.fft_len, mics.rate_hz, frames.frames()));
    const SpectralFilterBank bank = ComputeMwf(stats, c.reference_mic);
    const SnrValue in = SnrIn(mics, kSpeech1Stem);
    const SnrValue out = SnrOut(mics, bank, kSpeech1Stem, c.fft_len, c.hop);
    ASSERT_TRUE(in.ok() && out.ok()) << p.name;
    EXPECT_GE(*out.db, *in.db) << p.name;
  }
}

class ConfigTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = TempDir("cfg"); }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Write(const std::string& body) {
    const fs::path p = dir_ / "run.ini";
    std::ofstream(p) << body;
    return p.string();
  }
  fs::path dir_;
};

TEST_F(ConfigTest, ParsesSectionsAndResolvesPaths) {
  const PipelineConfig c = LoadPipelineConfig(Write(
      "[run]\nseed = 42\nduration_s = 60\nout_dir = results\n"
      "[scene]\npreset = pm45\nnoise = on\n"
      "[vad]\nsweep_alphas = 0.01, 0.05,0.1\n"
      "[mwf]\nreference_mic = 3\n"));
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.duration_s, 60.0);
  EXPECT_EQ(fs::path(c.out_dir), (dir_ / "results").lexically_normal());
  EXPECT_EQ(c.preset, "pm45");
  EXPECT_EQ(c.scene.speaker_angles_deg[0], -45);
  EXPECT_TRUE(c.noise);
  EXPECT_EQ(c.sweep_alphas, (std::vector<double>{0.01, 0.05, 0.1}));
  EXPECT_EQ(c.reference_mic, 2);
}

TEST_F(ConfigTest, ExplicitAnglesOverridePreset) {
  const PipelineConfig c = LoadPipelineConfig(
      Write("[scene]\npreset = pm90\nspeaker1_deg = -30\nspeaker2_deg = 60\n"));
  EXPECT_EQ(c.preset, "custom");
  EXPECT_EQ(c.scene.speaker_angles_deg[0], -30);
  EXPECT_EQ(c.scene.speaker_angles_deg[1], 60);
}

TEST_F(ConfigTest, Errors) {
  EXPECT_THROW(LoadPipelineConfig(Write("[run]\nsede = 1\n")), ConfigError);
  EXPECT_THROW(LoadPipelineConfig(Write("[bogus]\nx = 1\n")), ConfigError);
  EXPECT_THROW(LoadPipelineConfig(Write("[run]\nseed = -1\n")), ConfigError);
  EXPECT_THROW(LoadPipelineConfig(Write("[run]\nduration_s = long\n")), ConfigError);
  EXPECT_THROW(LoadPipelineConfig(Write("[run]\nskip_demix = maybe\n")), ConfigError);
  EXPECT_THROW(LoadPipelineConfig(Write("[scene]\npreset = pm91\n")), ConfigError);
  EXPECT_THROW(LoadPipelineConfig(Write("[mwf]\nreference_mic = 0\n")), ConfigError);
  EXPECT_THROW(LoadPipelineConfig((dir_ / "absent.ini").string()), IoError);
}

}  // namespace
}  // namespace neurosteer
