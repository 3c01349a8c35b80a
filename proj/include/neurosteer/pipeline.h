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

#ifndef NEUROSTEER_PIPELINE_H_
#define NEUROSTEER_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "neurosteer/aad.h"
#include "neurosteer/audio_buffer.h"
#include "neurosteer/csv_io.h"
#include "neurosteer/eeg_sim.h"
#include "neurosteer/envelope.h"
#include "neurosteer/metrics.h"
#include "neurosteer/mwf.h"
#include "neurosteer/scene.h"
#include "neurosteer/vad.h"

namespace neurosteer {

inline constexpr double kDefaultDurationS = 120.0;

struct PipelineConfig {
  std::string preset = "pm90";
  SceneConfig scene;
  bool noise = false;
  double duration_s = kDefaultDurationS;
  // Mono WAVs; empty selects the built-in speech-like generator.
  std::string speech1_path;
  std::string speech2_path;
  // HRIR manifest; empty selects the parametric head model.
  std::string hrir_manifest;

  double envelope_rate_hz = kDefaultEnvelopeRateHz;
  int mnica_iterations = 100;

  double aad_frame_s = kDefaultAadFrameS;
  int tau_max = kDefaultTauMax;
  EegSimulatorConfig eeg;

  double vad_alpha_demixed = kDemixedVadAlpha;
  double vad_alpha_mic = kMicVadAlpha;
  std::vector<double> sweep_alphas;

  double mwf_rate_hz = kDefaultMwfRateHz;
  int fft_len = kDefaultFftLen;
  int hop = kDefaultHop;
  int reference_mic = 0;  // 0-based

  bool skip_demix = false;
  bool oracle_aad = false;
  uint64_t seed = 1;
  std::string out_dir;

  // Sets the speaker angles from a preset name.
  void ApplyPreset(const std::string& name);
  double vad_alpha() const { return skip_demix ? vad_alpha_mic : vad_alpha_demixed; }
  void Validate() const;
};

// Flat INI with [run], [scene], [envelope], [demix], [aad], [vad] and [mwf]
// sections. Relative paths resolve against the config file's directory.
// Throws ConfigError for unknown keys or malformed values, IoError when the
// file cannot be read.
PipelineConfig LoadPipelineConfig(const std::string& path);

// Scene at the scene rate and the dry speech pair (2 x len). Stems are only
// needed for SNR evaluation.
struct SceneData {
  AudioBuffer mics;
  ChannelMatrix dry;
};
SceneData BuildScene(const PipelineConfig& config, bool keep_stems = true);

struct EnvelopeData {
  EnvelopeMatrix mics;
  EnvelopeMatrix clean;
  // Two candidate source envelopes, demixed or the best microphone pair.
  EnvelopeMatrix candidates;
  std::vector<int> candidate_mics;
  DeltaR prior;
  DeltaR post;
};
EnvelopeData ComputeEnvelopes(const PipelineConfig& config, const SceneData& scene);

struct AadOutcome {
  std::vector<AadDecision> decisions;
  std::vector<int> labels;
  std::optional<double> accuracy;
  std::optional<double> accuracy_clean;
  int ambiguous_frames = 0;
};
// Simulated-EEG attention detection on the candidates (leave-one-frame-out),
// or the oracle choice when config.oracle_aad is set.
AadOutcome RunAad(const PipelineConfig& config, const EnvelopeData& env);

struct EnhanceOutcome {
  VadTrack vad;
  SpectralFilterBank bank;
  AudioBuffer enhanced;
  SnrValue snr_in;
  SnrValue snr_out;
};
// VAD with threshold `alpha`, hybrid assembly, rank-1 MWF at the MWF rate.
// `mwf_mics` is the scene already resampled to config.mwf_rate_hz.
EnhanceOutcome RunEnhance(const PipelineConfig& config, const EnvelopeData& env,
                          const AudioBuffer& mwf_mics,
                          const std::vector<AadDecision>& decisions, double alpha);

struct EvalReport {
  std::string setup;
  int angle1_deg = 0;
  int angle2_deg = 0;
  bool noise = false;
  bool demix = true;
  std::optional<double> delta_r_prior;
  std::optional<double> delta_r_post;
  std::optional<double> aad_accuracy;
  std::optional<double> aad_accuracy_clean;
  int ambiguous_frames = 0;
  SnrValue snr_in;
  SnrValue snr_out;
  std::string error;
};

CsvRow EvalReportHeader();
CsvRow EvalReportRow(const EvalReport& report);

// Runs every stage and, when config.out_dir is set, writes enhanced.wav,
// decisions.csv, envelopes_{mics,clean,candidates}.csv, vad.csv and
// report.csv. On failure a FAILED file naming the stage is left in out_dir and
// the error is rethrown with the stage name prefixed.
EvalReport RunPipeline(const PipelineConfig& config);

// One row per preset x noise {off, on} x demix {on, off}; failures are
// recorded in the row's error column.
std::vector<EvalReport> RunMatrix(const PipelineConfig& base,
                                  const std::vector<std::string>& presets);

struct SweepRow {
  double alpha = 0.0;
  SnrValue snr_out;
  std::string error;
};
// Enhancement for every alpha with oracle attention.
std::vector<SweepRow> SweepVad(const PipelineConfig& config,
                               const std::vector<double>& alphas);

}  // namespace neurosteer

#endif  // NEUROSTEER_PIPELINE_H_
