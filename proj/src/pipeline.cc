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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "neurosteer/demix.h"
#include "neurosteer/dsp.h"
#include "neurosteer/errors.h"
#include "neurosteer/hrir.h"
#include "neurosteer/rng.h"
#include "neurosteer/stats.h"
#include "neurosteer/stft.h"
#include "neurosteer/wav_io.h"

namespace neurosteer {
namespace {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

enum SeedStream : uint64_t { kSpeech1 = 1, kSpeech2 = 2, kNoise = 3, kEeg = 4 };

const std::map<std::string, std::set<std::string>>& KnownKeys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run", {"seed", "duration_s", "out_dir", "skip_demix", "oracle_aad"}},
      {"scene",
       {"preset", "speaker1_deg", "speaker2_deg", "attended", "noise",
        "noise_power_ratio", "noise_angles", "rate_hz", "speech1", "speech2",
        "hrir_manifest"}},
      {"envelope", {"rate_hz"}},
      {"demix", {"iterations"}},
      {"aad",
       {"frame_s", "tau_max", "kappa", "tau_max_model", "unattended_gain",
        "noise_gain"}},
      {"vad", {"alpha_demixed", "alpha_mic", "sweep_alphas"}},
      {"mwf", {"rate_hz", "fft_len", "hop", "reference_mic"}},
  };
  return keys;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double ToDouble(const std::string& key, const std::string& text) {
  try {
    return ParseNumber(Trim(text));
  } catch (const IoError&) {
    throw ConfigError("'" + key + "' is not a number: '" + text + "'");
  }
}

long long ToInt(const std::string& key, const std::string& text) {
  const double v = ToDouble(key, text);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    throw ConfigError("'" + key + "' must be an integer");
  }
  return static_cast<long long>(v);
}

uint64_t ToSeed(const std::string& key, const std::string& text) {
  const std::string t = Trim(text);
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(t, &pos);
    if (pos == t.size() && !t.empty() && t[0] != '-') return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' must be an unsigned 64-bit integer");
}

bool ToBool(const std::string& key, const std::string& text) {
  std::string t = Trim(text);
  std::transform(t.begin(), t.end(), t.begin(), ::tolower);
  if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "off" || t == "no" || t == "0") return false;
  throw ConfigError("'" + key + "' must be a boolean");
}

std::vector<double> ToList(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!Trim(item).empty()) out.push_back(ToDouble(key, item));
  }
  return out;
}

std::string ResolvePath(const fs::path& base, const std::string& value) {
  const fs::path p(Trim(value));
  return p.is_absolute() || p.empty() ? p.string() : (base / p).lexically_normal().string();
}

const char* AttendedStem(int attended_index) {
  return attended_index == 1 ? kSpeech1Stem : kSpeech2Stem;
}

AudioBuffer LoadSpeech(const std::string& path, double rate_hz) {
  AudioBuffer b = ReadWav(path);
  if (b.channels() != 1) throw ConfigError("speech file must be mono: " + path);
  if (b.rate_hz != rate_hz) b = Resample(b, rate_hz);
  return b;
}

[[noreturn]] void RethrowWithStage(const std::string& stage, const Error& e) {
  const std::string msg = stage + ": " + e.what();
  switch (e.kind()) {
    case ErrorKind::kParameter:
      throw ParameterError(msg);
    case ErrorKind::kConfig:
      throw ConfigError(msg);
    case ErrorKind::kNumerical:
      throw NumericalError(msg);
    case ErrorKind::kIo:
      throw IoError(msg);
  }
  throw ParameterError(msg);
}

std::string OptionalFixed(const std::optional<double>& v, int decimals) {
  return v ? FormatFixed(*v, decimals) : "";
}

std::string CsvSafe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// The microphone pair (i != j) whose envelopes best follow the two clean
// envelopes.
std::vector<int> BestMicPair(const EnvelopeMatrix& mics, const EnvelopeMatrix& clean) {
  std::vector<int> best = {0, 1};
  double best_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < mics.channels(); ++i) {
    const double ri = Pearson(mics.channel(i), clean.channel(0));
    for (int j = 0; j < mics.channels(); ++j) {
      if (i == j) continue;
      const double score = ri + Pearson(mics.channel(j), clean.channel(1));
      if (score > best_score) {
        best_score = score;
        best = {i, j};
      }
    }
  }
  return best;
}

}  // namespace

void PipelineConfig::ApplyPreset(const std::string& name) {
  const SpeakerPreset& p = FindPreset(name);
  preset = p.name;
  scene.speaker_angles_deg = {p.angle1_deg, p.angle2_deg};
}

void PipelineConfig::Validate() const {
  scene.Validate();
  if (!(duration_s > 0.0)) throw ConfigError("duration must be positive");
  if (mnica_iterations < 0) throw ConfigError("M-NICA iterations must be >= 0");
  if (!(aad_frame_s > 0.0)) throw ConfigError("AAD frame length must be positive");
  if (tau_max < 0) throw ConfigError("tau_max must be non-negative");
  for (double a : {vad_alpha_demixed, vad_alpha_mic}) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("VAD alpha must lie in (0, 1)");
  }
  if (!(mwf_rate_hz > 0.0)) throw ConfigError("MWF rate must be positive");
  if (reference_mic < 0) throw ConfigError("reference microphone must be >= 1");
}

PipelineConfig LoadPipelineConfig(const std::string& path) {
  if (!fs::exists(path)) throw IoError("config file not found: " + path);
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  const fs::path base = fs::absolute(path).parent_path();
  PipelineConfig c;
  std::optional<int> angle1, angle2;
  for (const auto& [section, entries] : tree) {
    const auto known = KnownKeys().find(section);
    if (known == KnownKeys().end() || entries.empty()) {
      throw ConfigError("unknown config section '" + section + "'");
    }
    for (const auto& [key, node] : entries) {
      if (!known->second.contains(key)) {
        throw ConfigError("unknown config key '" + section + "." + key + "'");
      }
      const std::string name = section + "." + key;
      const std::string v = node.data();
      if (name == "run.seed") c.seed = ToSeed(name, v);
      else if (name == "run.duration_s") c.duration_s = ToDouble(name, v);
      else if (name == "run.out_dir") c.out_dir = ResolvePath(base, v);
      else if (name == "run.skip_demix") c.skip_demix = ToBool(name, v);
      else if (name == "run.oracle_aad") c.oracle_aad = ToBool(name, v);
      else if (name == "scene.preset") c.ApplyPreset(Trim(v));
      else if (name == "scene.speaker1_deg") angle1 = static_cast<int>(ToInt(name, v));
      else if (name == "scene.speaker2_deg") angle2 = static_cast<int>(ToInt(name, v));
      else if (name == "scene.attended") c.scene.attended_index = static_cast<int>(ToInt(name, v));
      else if (name == "scene.noise") c.noise = ToBool(name, v);
      else if (name == "scene.noise_power_ratio") c.scene.noise_power_ratio = ToDouble(name, v);
      else if (name == "scene.noise_angles") {
        c.scene.noise_angles_deg.clear();
        for (double a : ToList(name, v)) c.scene.noise_angles_deg.push_back(static_cast<int>(a));
      } else if (name == "scene.rate_hz") c.scene.rate_hz = ToDouble(name, v);
      else if (name == "scene.speech1") c.speech1_path = ResolvePath(base, v);
      else if (name == "scene.speech2") c.speech2_path = ResolvePath(base, v);
      else if (name == "scene.hrir_manifest") c.hrir_manifest = ResolvePath(base, v);
      else if (name == "envelope.rate_hz") c.envelope_rate_hz = ToDouble(name, v);
      else if (name == "demix.iterations") c.mnica_iterations = static_cast<int>(ToInt(name, v));
      else if (name == "aad.frame_s") c.aad_frame_s = ToDouble(name, v);
      else if (name == "aad.tau_max") c.tau_max = static_cast<int>(ToInt(name, v));
      else if (name == "aad.kappa") c.eeg.kappa = static_cast<int>(ToInt(name, v));
      else if (name == "aad.tau_max_model") c.eeg.tau_max_model = static_cast<int>(ToInt(name, v));
      else if (name == "aad.unattended_gain") c.eeg.unattended_gain = ToDouble(name, v);
      else if (name == "aad.noise_gain") c.eeg.noise_gain = ToDouble(name, v);
      else if (name == "vad.alpha_demixed") c.vad_alpha_demixed = ToDouble(name, v);
      else if (name == "vad.alpha_mic") c.vad_alpha_mic = ToDouble(name, v);
      else if (name == "vad.sweep_alphas") c.sweep_alphas = ToList(name, v);
      else if (name == "mwf.rate_hz") c.mwf_rate_hz = ToDouble(name, v);
      else if (name == "mwf.fft_len") c.fft_len = static_cast<int>(ToInt(name, v));
      else if (name == "mwf.hop") c.hop = static_cast<int>(ToInt(name, v));
      else if (name == "mwf.reference_mic") c.reference_mic = static_cast<int>(ToInt(name, v)) - 1;
    }
  }
  if (angle1) c.scene.speaker_angles_deg[0] = *angle1;
  if (angle2) c.scene.speaker_angles_deg[1] = *angle2;
  if (angle1 || angle2) c.preset = "custom";
  c.Validate();
  return c;
}

SceneData BuildScene(const PipelineConfig& config, bool keep_stems) {
  config.Validate();
  const double rate = config.scene.rate_hz;
  AudioBuffer s1, s2;
  if (config.speech1_path.empty() != config.speech2_path.empty()) {
    throw ConfigError("either both or neither speech file must be given");
  }
  if (config.speech1_path.empty()) {
    s1 = AudioBuffer::Mono(
        GenerateSpeechLike(config.duration_s, rate, DeriveSeed(config.seed, kSpeech1)), rate);
    s2 = AudioBuffer::Mono(
        GenerateSpeechLike(config.duration_s, rate, DeriveSeed(config.seed, kSpeech2)), rate);
  } else {
    s1 = LoadSpeech(config.speech1_path, rate);
    s2 = LoadSpeech(config.speech2_path, rate);
  }

  SceneConfig scene = config.scene;
  if (!config.noise) {
    scene.noise_angles_deg.clear();
  } else if (scene.noise_angles_deg.empty()) {
    scene.noise_angles_deg = DefaultNoiseAngles();
  }
  std::vector<int> angles(scene.speaker_angles_deg.begin(), scene.speaker_angles_deg.end());
  angles.insert(angles.end(), scene.noise_angles_deg.begin(), scene.noise_angles_deg.end());
  const HrirSet hrirs = config.hrir_manifest.empty()
                            ? ParametricHrirSet(angles, DefaultMicLayout(), rate)
                            : LoadHrirSet(config.hrir_manifest, rate);

  SceneData data;
  data.dry = NormalizeSpeechPair(s1, s2, nullptr).samples;
  std::vector<AudioBuffer> noise;
  if (!scene.noise_angles_deg.empty()) {
    std::vector<std::vector<double>> sources = SpeechShapedNoise(
        {RowSpan(data.dry, 0), RowSpan(data.dry, 1)},
        static_cast<int>(scene.noise_angles_deg.size()),
        static_cast<size_t>(data.dry.cols()), DeriveSeed(config.seed, kNoise));
    for (auto& n : sources) noise.push_back(AudioBuffer::Mono(std::move(n), rate));
  }
  data.mics = SynthesizeScene(s1, s2, noise, hrirs, scene, keep_stems);
  return data;
}

EnvelopeData ComputeEnvelopes(const PipelineConfig& config, const SceneData& scene) {
  EnvelopeData env;
  env.mics = ShortTimeEnergy(scene.mics, config.envelope_rate_hz);
  env.clean = ShortTimeEnergy(scene.dry, scene.mics.rate_hz, config.envelope_rate_hz);
  env.prior = DeltaRHl(env.mics.values, env.clean.values);
  if (config.skip_demix) {
    env.candidate_mics = BestMicPair(env.mics, env.clean);
    env.candidates.kind = EnvelopeKind::kEnergy;
    env.candidates.rate_hz = env.mics.rate_hz;
    env.candidates.values.resize(2, env.mics.frames());
    for (int c = 0; c < 2; ++c) {
      env.candidates.values.row(c) = env.mics.values.row(env.candidate_mics[c]);
    }
  } else {
    env.candidates = Mnica(env.mics, 2, config.mnica_iterations).sources;
  }
  env.post = DeltaRHl(env.candidates.values, env.clean.values);
  return env;
}

AadOutcome RunAad(const PipelineConfig& config, const EnvelopeData& env) {
  const EnvelopeMatrix clean = ToAmplitudeBand(env.clean);
  const EnvelopeMatrix cands = ToAmplitudeBand(env.candidates);
  const double rate = env.clean.rate_hz;
  const Eigen::Index frame = FrameSamples(config.aad_frame_s, rate);
  const std::vector<FrameRange> frames =
      MakeFrames(env.clean.frames(), frame, config.tau_max);
  if (frames.empty()) throw ParameterError("scene shorter than one AAD frame");

  AadOutcome out;
  out.labels.assign(frames.size(), config.scene.attended_index);
  const std::vector<CandidateAssociation> assoc = AssociateCandidates(
      cands.channel(0), cands.channel(1), clean.channel(0), clean.channel(1), frames);

  if (config.oracle_aad) {
    for (size_t f = 0; f < frames.size(); ++f) {
      const auto n = static_cast<size_t>(frames[f].size());
      const auto seg = [&](const EnvelopeMatrix& m, int c) {
        return m.channel(c).subspan(frames[f].begin, n);
      };
      const int att = out.labels[f] - 1;
      double score[2], r_att[2];
      for (int c = 0; c < 2; ++c) {
        r_att[c] = Pearson(seg(cands, c), seg(clean, att));
        score[c] = r_att[c] - Pearson(seg(cands, c), seg(clean, 1 - att));
      }
      AadDecision d;
      d.frame_index = static_cast<int>(f);
      d.chosen = score[0] >= score[1] ? 1 : 2;
      d.r_a = r_att[d.chosen - 1];
      d.r_u = r_att[2 - d.chosen];
      out.decisions.push_back(d);
    }
  } else {
    EegSimulatorConfig sim = config.eeg;
    sim.seed = DeriveSeed(config.seed, kEeg);
    const EegRecording eeg = SimulateEeg(clean.channel(0), clean.channel(1), rate,
                                         out.labels, config.aad_frame_s, sim);
    const AttentionStreams streams =
        AssembleAttention(clean.channel(0), clean.channel(1), out.labels, frame);
    out.decisions = CrossValidate(eeg, streams.attended, cands.channel(0),
                                  cands.channel(1), config.aad_frame_s, config.tau_max)
                        .decisions;
    out.accuracy_clean = CrossValidate(eeg, streams.attended, clean.channel(0),
                                       clean.channel(1), config.aad_frame_s,
                                       config.tau_max)
                             .accuracy;
  }
  const AccuracyReport acc = AadAccuracy(out.decisions, assoc, out.labels);
  out.accuracy = acc.accuracy;
  out.ambiguous_frames =
      static_cast<int>(std::count(acc.ambiguous.begin(), acc.ambiguous.end(), true));
  return out;
}

EnhanceOutcome RunEnhance(const PipelineConfig& config, const EnvelopeData& env,
                          const AudioBuffer& mwf_mics,
                          const std::vector<AadDecision>& decisions, double alpha) {
  EnhanceOutcome out;
  const double rate = env.candidates.rate_hz;
  const VadTrack t1 = VadThreshold(env.candidates.channel(0), rate, alpha);
  const VadTrack t2 = VadThreshold(env.candidates.channel(1), rate, alpha);
  out.vad = AssembleHybridVad(t1, t2, decisions, config.aad_frame_s);
  const StftFrames frames = Stft(mwf_mics, config.fft_len, config.hop);
  const std::vector<uint8_t> labels =
      ExpandVad(out.vad, config.hop, config.fft_len, mwf_mics.rate_hz, frames.frames());
  const BinStats stats = EstimateBinStats(frames, labels);
  out.bank = ComputeMwf(stats, config.reference_mic);
  out.enhanced = ApplyMwf(mwf_mics, out.bank, config.fft_len, config.hop);
  const std::string attended = AttendedStem(config.scene.attended_index);
  out.snr_in = SnrIn(mwf_mics, attended);
  out.snr_out = SnrOfFiltered(out.enhanced, attended);
  return out;
}

CsvRow EvalReportHeader() {
  return {"setup",          "angle1_deg",      "angle2_deg",    "noise",
          "demix",          "delta_r_prior",   "delta_r_post",  "aad_accuracy",
          "aad_accuracy_clean", "ambiguous_frames", "snr_in_db", "snr_in_flag",
          "snr_out_db",     "snr_out_flag",    "error"};
}

CsvRow EvalReportRow(const EvalReport& r) {
  return {r.setup,
          std::to_string(r.angle1_deg),
          std::to_string(r.angle2_deg),
          r.noise ? "1" : "0",
          r.demix ? "1" : "0",
          OptionalFixed(r.delta_r_prior, 4),
          OptionalFixed(r.delta_r_post, 4),
          OptionalFixed(r.aad_accuracy, 4),
          OptionalFixed(r.aad_accuracy_clean, 4),
          std::to_string(r.ambiguous_frames),
          OptionalFixed(r.snr_in.db, 2),
          CsvSafe(r.snr_in.flag),
          OptionalFixed(r.snr_out.db, 2),
          CsvSafe(r.snr_out.flag),
          CsvSafe(r.error)};
}

EvalReport RunPipeline(const PipelineConfig& config) {
  const fs::path out_dir(config.out_dir);
  const bool write = !config.out_dir.empty();
  if (write) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + config.out_dir);
    fs::remove(out_dir / "FAILED", ec);
    fs::remove(out_dir / "report.csv", ec);
  }
  auto run = [&](const std::string& name, auto&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      if (write) {
        std::ofstream(out_dir / "FAILED") << name << ": " << e.what() << '\n';
      }
      RethrowWithStage(name, e);
    }
  };

  EvalReport report;
  report.setup = config.preset;
  report.angle1_deg = config.scene.speaker_angles_deg[0];
  report.angle2_deg = config.scene.speaker_angles_deg[1];
  report.noise = config.noise;
  report.demix = !config.skip_demix;

  SceneData scene = run("scene", [&] { return BuildScene(config); });
  const EnvelopeData env = run(config.skip_demix ? "envelope" : "demix",
                               [&] { return ComputeEnvelopes(config, scene); });
  report.delta_r_prior = env.prior.mean;
  report.delta_r_post = env.post.mean;
  AudioBuffer mwf_mics =
      run("resample", [&] { return Resample(std::move(scene.mics), config.mwf_rate_hz); });
  const AadOutcome aad = run("aad", [&] { return RunAad(config, env); });
  report.aad_accuracy = aad.accuracy;
  report.aad_accuracy_clean = aad.accuracy_clean;
  report.ambiguous_frames = aad.ambiguous_frames;
  const EnhanceOutcome enh = run("enhance", [&] {
    return RunEnhance(config, env, mwf_mics, aad.decisions, config.vad_alpha());
  });
  report.snr_in = enh.snr_in;
  report.snr_out = enh.snr_out;

  if (write) {
    run("write", [&] {
      AudioBuffer enhanced;
      enhanced.rate_hz = enh.enhanced.rate_hz;
      enhanced.samples = enh.enhanced.samples;
      WriteWav((out_dir / "enhanced.wav").string(), enhanced);
      WriteDecisionsCsv((out_dir / "decisions.csv").string(), aad.decisions);
      WriteEnvelopeCsv((out_dir / "envelopes_mics.csv").string(), env.mics);
      WriteEnvelopeCsv((out_dir / "envelopes_clean.csv").string(), env.clean);
      WriteEnvelopeCsv((out_dir / "envelopes_candidates.csv").string(), env.candidates);
      std::vector<CsvRow> vad_rows;
      for (size_t n = 0; n < enh.vad.bits.size(); ++n) {
        vad_rows.push_back({std::to_string(n), std::to_string(enh.vad.bits[n])});
      }
      WriteCsv((out_dir / "vad.csv").string(), {"frame", "active"}, vad_rows);
      WriteCsv((out_dir / "report.csv").string(), EvalReportHeader(),
               {EvalReportRow(report)});
      return 0;
    });
  }
  return report;
}

std::vector<EvalReport> RunMatrix(const PipelineConfig& base,
                                  const std::vector<std::string>& presets) {
  std::vector<EvalReport> rows;
  for (const std::string& name : presets) {
    for (bool noise : {false, true}) {
      for (bool demix : {true, false}) {
        PipelineConfig c = base;
        c.out_dir.clear();
        c.noise = noise;
        c.skip_demix = !demix;
        EvalReport r;
        r.setup = name;
        r.noise = noise;
        r.demix = demix;
        try {
          c.ApplyPreset(name);
          r.angle1_deg = c.scene.speaker_angles_deg[0];
          r.angle2_deg = c.scene.speaker_angles_deg[1];
          r = RunPipeline(c);
        } catch (const Error& e) {
          r.error = e.what();
        }
        rows.push_back(r);
      }
    }
  }
  return rows;
}

std::vector<SweepRow> SweepVad(const PipelineConfig& config,
                               const std::vector<double>& alphas) {
  std::vector<SweepRow> rows;
  if (alphas.empty()) return rows;
  PipelineConfig c = config;
  c.oracle_aad = true;
  SceneData scene = BuildScene(c);
  const EnvelopeData env = ComputeEnvelopes(c, scene);
  const AadOutcome aad = RunAad(c, env);
  const AudioBuffer mwf_mics = Resample(std::move(scene.mics), c.mwf_rate_hz);
  for (double alpha : alphas) {
    SweepRow row;
    row.alpha = alpha;
    try {
      row.snr_out = RunEnhance(c, env, mwf_mics, aad.decisions, alpha).snr_out;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace neurosteer
