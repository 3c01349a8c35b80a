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

// Command-line front end: individual stages and the full experiment.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "neurosteer/aad.h"
#include "neurosteer/csv_io.h"
#include "neurosteer/demix.h"
#include "neurosteer/dsp.h"
#include "neurosteer/eeg_sim.h"
#include "neurosteer/envelope.h"
#include "neurosteer/errors.h"
#include "neurosteer/metrics.h"
#include "neurosteer/mwf.h"
#include "neurosteer/pipeline.h"
#include "neurosteer/scene.h"
#include "neurosteer/stft.h"
#include "neurosteer/vad.h"
#include "neurosteer/wav_io.h"

namespace neurosteer {
namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<uint64_t> seed;
  std::string preset;
  bool skip_demix = false;
  bool oracle_aad = false;
};

void AddCommon(CLI::App* app, CommonOptions* o) {
  app->add_option("--config", o->config, "INI configuration file");
  app->add_option("--out", o->out, "Output directory");
  app->add_option("--seed", o->seed, "Seed for every stochastic step");
  app->add_option("--preset", o->preset, "Speaker setup, e.g. pm90 or m60_m30");
  app->add_flag("--skip-demix", o->skip_demix,
                "Use the best microphone envelopes instead of demixing");
  app->add_flag("--oracle-aad", o->oracle_aad, "Use an ideal attention track");
}

PipelineConfig MakeConfig(const CommonOptions& o) {
  PipelineConfig c = o.config.empty() ? PipelineConfig{} : LoadPipelineConfig(o.config);
  if (!o.preset.empty()) c.ApplyPreset(o.preset);
  if (o.seed) c.seed = *o.seed;
  if (o.skip_demix) c.skip_demix = true;
  if (o.oracle_aad) c.oracle_aad = true;
  if (!o.out.empty()) c.out_dir = o.out;
  c.Validate();
  return c;
}

fs::path RequireOutDir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("--out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);
  return fs::path(dir);
}

AudioBuffer StemBuffer(const AudioBuffer& b, const std::string& label) {
  AudioBuffer out;
  out.rate_hz = b.rate_hz;
  out.samples = b.stem(label);
  return out;
}

EnvelopeMatrix AsAmplitude(const EnvelopeMatrix& env) {
  return env.kind == EnvelopeKind::kEnergy ? ToAmplitudeBand(env) : env;
}

void RequireChannels(const EnvelopeMatrix& env, int channels, const std::string& what) {
  if (env.channels() != channels) {
    throw ParameterError(what + " must have " + std::to_string(channels) + " channels");
  }
}

std::string CsvSafe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  return s;
}

void PrintReport(const EvalReport& r) {
  std::cout << "delta_r_prior " << FormatFixed(r.delta_r_prior.value_or(0), 4)
            << "\ndelta_r_post " << FormatFixed(r.delta_r_post.value_or(0), 4);
  if (r.aad_accuracy) std::cout << "\naad_accuracy " << FormatFixed(*r.aad_accuracy, 4);
  if (r.aad_accuracy_clean) {
    std::cout << "\naad_accuracy_clean " << FormatFixed(*r.aad_accuracy_clean, 4);
  }
  std::cout << "\nsnr_in_db " << (r.snr_in.ok() ? FormatFixed(*r.snr_in.db, 2) : r.snr_in.flag)
            << "\nsnr_out_db "
            << (r.snr_out.ok() ? FormatFixed(*r.snr_out.db, 2) : r.snr_out.flag) << '\n';
}

int Main(int argc, char** argv) {
  CLI::App app{"EEG-informed attended speaker extraction"};
  app.require_subcommand(1);

  CommonOptions common;
  auto* scene_cmd = app.add_subcommand("scene", "Synthesize a microphone scene with stems");
  AddCommon(scene_cmd, &common);

  std::string env_in, env_out;
  double env_rate = kDefaultEnvelopeRateHz;
  bool env_amplitude = false;
  auto* env_cmd = app.add_subcommand("envelope", "Energy envelopes of a WAV file");
  env_cmd->add_option("--in", env_in, "Input WAV")->required();
  env_cmd->add_option("--out", env_out, "Output CSV")->required();
  env_cmd->add_option("--rate", env_rate, "Envelope rate in Hz");
  env_cmd->add_flag("--amplitude", env_amplitude, "Emit 1-9.5 Hz amplitude envelopes");

  std::string demix_in, demix_out;
  int demix_sources = 2;
  int demix_iterations = kDefaultMnicaIterations;
  auto* demix_cmd = app.add_subcommand("demix", "M-NICA on an energy envelope CSV");
  demix_cmd->add_option("--in", demix_in, "Energy envelope CSV")->required();
  demix_cmd->add_option("--out", demix_out, "Demixed envelope CSV")->required();
  demix_cmd->add_option("--sources", demix_sources, "Number of sources");
  demix_cmd->add_option("--iterations", demix_iterations, "Iterations");

  std::string sim_env, sim_out;
  int sim_attended = 1;
  double frame_s = kDefaultAadFrameS;
  EegSimulatorConfig sim_config;
  auto* sim_cmd = app.add_subcommand("eeg-sim", "Simulate EEG from two clean envelopes");
  sim_cmd->add_option("--env", sim_env, "Two-channel clean envelope CSV")->required();
  sim_cmd->add_option("--out", sim_out, "Output directory")->required();
  sim_cmd->add_option("--attended", sim_attended, "Attended speaker (1 or 2)");
  sim_cmd->add_option("--frame-s", frame_s, "AAD frame length in seconds");
  sim_cmd->add_option("--seed", sim_config.seed, "Simulator seed");
  sim_cmd->add_option("--noise-gain", sim_config.noise_gain, "Noise gain");
  sim_cmd->add_option("--unattended-gain", sim_config.unattended_gain, "Unattended gain");

  std::string eeg_path, labels_path, decoder_path, cand_path;
  int tau_max = kDefaultTauMax;
  auto* train_cmd = app.add_subcommand("train", "Train a decoder on all frames");
  train_cmd->add_option("--eeg", eeg_path, "EEG CSV")->required();
  train_cmd->add_option("--env", sim_env, "Two-channel clean envelope CSV")->required();
  train_cmd->add_option("--labels", labels_path, "Attended label CSV")->required();
  train_cmd->add_option("--out", decoder_path, "Decoder CSV")->required();
  train_cmd->add_option("--tau-max", tau_max, "Decoder lags");
  train_cmd->add_option("--frame-s", frame_s, "AAD frame length in seconds");

  std::string decisions_path;
  auto* detect_cmd = app.add_subcommand("detect", "Decide attention per frame");
  detect_cmd->add_option("--eeg", eeg_path, "EEG CSV")->required();
  detect_cmd->add_option("--decoder", decoder_path, "Decoder CSV")->required();
  detect_cmd->add_option("--candidates", cand_path, "Two-channel candidate CSV")->required();
  detect_cmd->add_option("--out", decisions_path, "Decisions CSV")->required();
  detect_cmd->add_option("--frame-s", frame_s, "AAD frame length in seconds");

  std::string mix_path, enh_out;
  double alpha = kDemixedVadAlpha;
  double mwf_rate = kDefaultMwfRateHz;
  int reference_mic = 1;
  auto* enhance_cmd = app.add_subcommand("enhance", "VAD-driven rank-1 MWF");
  enhance_cmd->add_option("--in", mix_path, "Multichannel mixture WAV")->required();
  enhance_cmd->add_option("--candidates", cand_path, "Two-channel energy CSV")->required();
  enhance_cmd->add_option("--decisions", decisions_path, "Decisions CSV")->required();
  enhance_cmd->add_option("--out", enh_out, "Output directory")->required();
  enhance_cmd->add_option("--alpha", alpha, "VAD threshold fraction");
  enhance_cmd->add_option("--rate", mwf_rate, "MWF sample rate in Hz");
  enhance_cmd->add_option("--ref", reference_mic, "Reference microphone (1-based)");
  enhance_cmd->add_option("--frame-s", frame_s, "AAD frame length in seconds");

  std::string scene_dir, bank_path;
  int eval_attended = 1;
  auto* eval_cmd = app.add_subcommand("eval", "Input and output SNR of a filter bank");
  eval_cmd->add_option("--scene-dir", scene_dir, "Directory written by `scene`")->required();
  eval_cmd->add_option("--bank", bank_path, "Filter bank CSV")->required();
  eval_cmd->add_option("--attended", eval_attended, "Attended speaker (1 or 2)");
  eval_cmd->add_option("--rate", mwf_rate, "MWF sample rate in Hz");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run the full experiment");
  AddCommon(pipeline_cmd, &common);

  std::vector<std::string> presets;
  auto* matrix_cmd = app.add_subcommand("matrix", "All setups x noise x demix");
  AddCommon(matrix_cmd, &common);
  matrix_cmd->add_option("--presets", presets, "Subset of presets")->delimiter(',');

  std::vector<double> alphas;
  auto* sweep_cmd = app.add_subcommand("sweep-vad", "Output SNR over VAD thresholds");
  AddCommon(sweep_cmd, &common);
  sweep_cmd->add_option("--alphas", alphas, "Threshold fractions")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*scene_cmd) {
      const PipelineConfig c = MakeConfig(common);
      const fs::path out = RequireOutDir(c.out_dir);
      const SceneData scene = BuildScene(c);
      AudioBuffer mix;
      mix.rate_hz = scene.mics.rate_hz;
      mix.samples = scene.mics.samples;
      WriteWav((out / "mixture.wav").string(), mix);
      for (const auto& [label, stem] : scene.mics.stems) {
        WriteWav((out / (label + ".wav")).string(), StemBuffer(scene.mics, label));
      }
      AudioBuffer dry;
      dry.rate_hz = scene.mics.rate_hz;
      dry.samples = scene.dry;
      WriteWav((out / "dry.wav").string(), dry);
    } else if (*env_cmd) {
      EnvelopeMatrix env = ShortTimeEnergy(ReadWav(env_in), env_rate);
      if (env_amplitude) env = ToAmplitudeBand(env);
      WriteEnvelopeCsv(env_out, env);
    } else if (*demix_cmd) {
      const DemixResult r = Mnica(ReadEnvelopeCsv(demix_in), demix_sources, demix_iterations);
      WriteEnvelopeCsv(demix_out, r.sources);
      std::cout << "mean_abs_corr " << FormatFixed(MeanPairwiseAbsCorr(r.sources.values), 4)
                << '\n';
    } else if (*sim_cmd) {
      const EnvelopeMatrix env = AsAmplitude(ReadEnvelopeCsv(sim_env));
      RequireChannels(env, 2, "clean envelope CSV");
      const auto frames = static_cast<size_t>(
          std::max<Eigen::Index>(1, env.frames() / FrameSamples(frame_s, env.rate_hz)));
      const std::vector<int> labels(frames, sim_attended);
      const EegRecording eeg = SimulateEeg(env.channel(0), env.channel(1), env.rate_hz,
                                           labels, frame_s, sim_config);
      const fs::path out = RequireOutDir(sim_out);
      WriteEegCsv((out / "eeg.csv").string(), eeg);
      WriteLabelsCsv((out / "labels.csv").string(), labels);
    } else if (*train_cmd) {
      const EegRecording eeg = ReadEegCsv(eeg_path);
      const EnvelopeMatrix env = AsAmplitude(ReadEnvelopeCsv(sim_env));
      RequireChannels(env, 2, "clean envelope CSV");
      const std::vector<int> labels = ReadLabelsCsv(labels_path);
      const Eigen::Index frame = FrameSamples(frame_s, eeg.rate_hz);
      const AttentionStreams streams =
          AssembleAttention(env.channel(0), env.channel(1), labels, frame);
      const Decoder d = TrainDecoder(eeg, streams.attended,
                                     MakeFrames(eeg.length(), frame, tau_max), tau_max);
      WriteDecoderCsv(decoder_path, d);
    } else if (*detect_cmd) {
      const EegRecording eeg = ReadEegCsv(eeg_path);
      const EnvelopeMatrix cands = AsAmplitude(ReadEnvelopeCsv(cand_path));
      RequireChannels(cands, 2, "candidate CSV");
      const std::vector<AadDecision> decisions = DetectAttention(
          eeg, ReadDecoderCsv(decoder_path), cands.channel(0), cands.channel(1), frame_s);
      WriteDecisionsCsv(decisions_path, decisions);
    } else if (*enhance_cmd) {
      const EnvelopeMatrix cands = ReadEnvelopeCsv(cand_path);
      RequireChannels(cands, 2, "candidate CSV");
      if (cands.kind != EnvelopeKind::kEnergy) {
        throw ParameterError("VAD needs energy envelopes");
      }
      const VadTrack vad = AssembleHybridVad(
          VadThreshold(cands.channel(0), cands.rate_hz, alpha),
          VadThreshold(cands.channel(1), cands.rate_hz, alpha),
          ReadDecisionsCsv(decisions_path), frame_s);
      const AudioBuffer mics = Resample(ReadWav(mix_path), mwf_rate);
      const StftFrames frames = Stft(mics, kDefaultFftLen, kDefaultHop);
      const BinStats stats = EstimateBinStats(
          frames, ExpandVad(vad, kDefaultHop, kDefaultFftLen, mics.rate_hz, frames.frames()));
      const SpectralFilterBank bank = ComputeMwf(stats, reference_mic - 1);
      const fs::path out = RequireOutDir(enh_out);
      WriteWav((out / "enhanced.wav").string(), ApplyMwf(mics, bank));
      WriteFilterBankCsv((out / "filterbank.csv").string(), bank);
    } else if (*eval_cmd) {
      const fs::path dir(scene_dir);
      AudioBuffer mics = ReadWav((dir / "mixture.wav").string());
      for (const char* label : {kSpeech1Stem, kSpeech2Stem, kNoiseStem}) {
        const fs::path p = dir / (std::string(label) + ".wav");
        if (fs::exists(p)) mics.stems[label] = ReadWav(p.string()).samples;
      }
      mics.Validate(1e-4);
      mics = Resample(mics, mwf_rate);
      const std::string attended = eval_attended == 1 ? kSpeech1Stem : kSpeech2Stem;
      const SnrValue in = SnrIn(mics, attended);
      const SnrValue out = SnrOut(mics, ReadFilterBankCsv(bank_path), attended);
      std::cout << "snr_in_db " << (in.ok() ? FormatFixed(*in.db, 2) : in.flag)
                << "\nsnr_out_db " << (out.ok() ? FormatFixed(*out.db, 2) : out.flag)
                << '\n';
    } else if (*pipeline_cmd) {
      PrintReport(RunPipeline(MakeConfig(common)));
    } else if (*matrix_cmd) {
      const PipelineConfig c = MakeConfig(common);
      const fs::path out = RequireOutDir(c.out_dir);
      if (presets.empty()) {
        for (const SpeakerPreset& p : SpeakerPresets()) presets.push_back(p.name);
      }
      std::vector<CsvRow> rows;
      for (const EvalReport& r : RunMatrix(c, presets)) rows.push_back(EvalReportRow(r));
      WriteCsv((out / "matrix.csv").string(), EvalReportHeader(), rows);
    } else if (*sweep_cmd) {
      const PipelineConfig c = MakeConfig(common);
      const fs::path out = RequireOutDir(c.out_dir);
      if (alphas.empty()) alphas = c.sweep_alphas;
      if (alphas.empty()) {
        for (int i = 0; i < 13; ++i) alphas.push_back(0.01 + 0.02 * i);
      }
      std::vector<CsvRow> rows;
      for (const SweepRow& r : SweepVad(c, alphas)) {
        rows.push_back({FormatFixed(r.alpha, 4),
                        r.snr_out.ok() ? FormatFixed(*r.snr_out.db, 2) : "",
                        r.snr_out.flag, CsvSafe(r.error)});
      }
      WriteCsv((out / "sweep.csv").string(), {"alpha", "snr_out_db", "snr_out_flag", "error"},
               rows);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  }
  return 0;
}

}  // namespace
}  // namespace neurosteer

int main(int argc, char** argv) { return neurosteer::Main(argc, argv); }
