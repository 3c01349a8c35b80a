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

// Acceptance suite: one PASS/FAIL line per criterion. Usage:
//   acceptance <path to neurosteer CLI> [criterion numbers...]

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "neurosteer/aad.h"
#include "neurosteer/demix.h"
#include "neurosteer/dsp.h"
#include "neurosteer/metrics.h"
#include "neurosteer/mwf.h"
#include "neurosteer/pipeline.h"
#include "neurosteer/rng.h"
#include "neurosteer/stats.h"
#include "neurosteer/stft.h"
#include "test_util.h"

namespace neurosteer {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using testing::GeneratorG;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Num(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome LeastSquaresOracle() {
  const auto start = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    EegRecording eeg;
    eeg.values = testing::RandomMatrix(rng, 30, 200);
    const std::vector<double> s = testing::RandomNormal(rng, 200);
    const Decoder d = TrainDecoder(eeg, s, {{0, 200}}, 0);
    const Eigen::MatrixXd r = eeg.values.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd oracle =
        svd.matrixV() * svd.singularValues().cwiseInverse().asDiagonal() *
        svd.matrixU().transpose() * Eigen::Map<const Eigen::VectorXd>(s.data(), 200);
    worst = std::max(worst, (d.weights - oracle).norm() / oracle.norm());
  }
  const double t = Seconds(start);
  return {worst < 1e-8 && t < 5.0,
          "max relative error " + Num(worst) + ", " + Num(t, 3) + " s"};
}

Outcome LagReconstruction() {
  Rng rng(202);
  const int kappa = 4, tau_max = 3, n = 100;
  EegRecording eeg;
  eeg.values = testing::RandomMatrix(rng, kappa, n + tau_max);
  const std::vector<double> d = testing::RandomNormal(rng, kappa * (tau_max + 1));
  const Eigen::VectorXd y = BuildLagMatrix(eeg, tau_max, {0, n}) *
                            Eigen::Map<const Eigen::VectorXd>(d.data(), d.size());
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int tau = 0; tau <= tau_max; ++tau) {
      for (int k = 0; k < kappa; ++k) acc += eeg.values(k, i + tau) * d[k * (tau_max + 1) + tau];
    }
    worst = std::max(worst, std::abs(acc - y(i)));
  }
  return {worst < 1e-12, "max abs error " + Num(worst)};
}

Outcome MnicaSeparation() {
  const auto start = Clock::now();
  int matched = 0, improved = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = GeneratorG(seed);
    const DemixResult r = Mnica(g.mixed, 2);
    const SourceMatch m = MatchSources(r.sources.values, g.sources);
    if (std::min(m.correlations[0], m.correlations[1]) >= 0.9) ++matched;
    const double prior = DeltaRHl(g.mixed.values, g.sources).mean;
    const double post = DeltaRHl(r.sources.values, g.sources).mean;
    if (post > prior) ++improved;
  }
  const double t = Seconds(start);
  return {matched >= 18 && improved >= 18 && t < 30.0,
          std::to_string(matched) + "/20 matched at r >= 0.9, " +
              std::to_string(improved) + "/20 with delta r post > prior, " +
              Num(t, 3) + " s"};
}

Outcome DeltaRTrend() {
  std::vector<double> separation, delta;
  std::ostringstream detail;
  for (const SpeakerPreset& p : SpeakerPresets()) {
    PipelineConfig c;
    c.ApplyPreset(p.name);
    const SceneData scene = BuildScene(c, false);
    const EnvelopeData env = ComputeEnvelopes(c, scene);
    separation.push_back(p.separation_deg());
    delta.push_back(env.post.mean);
    detail << p.name << "=" << Num(env.post.mean, 3) << " ";
  }
  const std::vector<double> rs = testing::Ranks(separation);
  const std::vector<double> rd = testing::Ranks(delta);
  const double rho = Pearson(rs, rd);
  return {rho > 0.5, "Spearman " + Num(rho, 3) + " (" + detail.str() + ")"};
}

SnrValue BestMicSnr(PipelineConfig c, bool noise) {
  c.noise = noise;
  SceneData scene = BuildScene(c);
  const AudioBuffer mics = Resample(std::move(scene.mics), c.mwf_rate_hz);
  return SnrIn(mics, kSpeech1Stem);
}

Outcome NoiseOffset() {
  PipelineConfig c;
  c.ApplyPreset("pm90");
  const SnrValue clean = BestMicSnr(c, false);
  const SnrValue noisy = BestMicSnr(c, true);
  if (!clean.ok() || !noisy.ok()) return {false, "SNR undefined"};
  const double drop = *clean.db - *noisy.db;
  return {std::abs(drop - 3.0) <= 1.0,
          "SNR_in " + Num(*clean.db) + " -> " + Num(*noisy.db) + " dB, drop " +
              Num(drop) + " dB"};
}

Outcome MwfRank1() {
  Rng rng(606);
  const int k = 6;
  double worst_rxx = 0.0, worst_w = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXcd a = testing::RandomComplex(rng, k, 1);
    const double sigma2 = rng.Uniform(0.1, 10.0);
    const Eigen::MatrixXcd b = testing::RandomComplex(rng, k, 2 * k);
    const Eigen::MatrixXcd r_vv = b * b.adjoint() / (2.0 * k);
    const Eigen::MatrixXcd r_xx = sigma2 * a * a.adjoint();
    const Rank1Estimate est = GevdRank1(r_xx + r_vv, r_vv);
    worst_rxx = std::max(worst_rxx, (est.r_xx - r_xx).norm() / r_xx.norm());
    const int ref = trial % k;
    const Eigen::VectorXcd w = WienerWeights(est.r_xx, est.r_vv, ref);
    const Eigen::VectorXcd direct =
        (r_xx + est.r_vv).fullPivLu().solve(Eigen::MatrixXcd(r_xx)).col(ref);
    worst_w = std::max(worst_w, (w - direct).norm() / direct.norm());
  }
  return {worst_rxx < 1e-8 && worst_w < 1e-8,
          "R_xx rel error " + Num(worst_rxx) + ", W rel error " + Num(worst_w)};
}

Outcome EndToEnd() {
  const auto start = Clock::now();
  PipelineConfig c;
  c.ApplyPreset("pm90");
  c.duration_s = 60.0;
  c.oracle_aad = true;
  c.vad_alpha_demixed = 0.05;
  const EvalReport quiet = RunPipeline(c);
  c.noise = true;
  const EvalReport noisy = RunPipeline(c);
  const double t = Seconds(start);
  if (!quiet.snr_in.ok() || !quiet.snr_out.ok() || !noisy.snr_in.ok() ||
      !noisy.snr_out.ok()) {
    return {false, "SNR undefined"};
  }
  const double gain = *quiet.snr_out.db - *quiet.snr_in.db;
  const bool pass = gain >= 10.0 && *noisy.snr_out.db > 0.0 &&
                    *noisy.snr_in.db < *quiet.snr_in.db && t < 120.0;
  return {pass, "noise-free " + Num(*quiet.snr_in.db) + " -> " + Num(*quiet.snr_out.db) +
                    " dB (gain " + Num(gain) + "), noisy " + Num(*noisy.snr_in.db) +
                    " -> " + Num(*noisy.snr_out.db) + " dB, " + Num(t, 3) + " s"};
}

Outcome VadOrdering() {
  std::vector<double> alphas;
  for (int i = 0; i < 13; ++i) alphas.push_back(0.01 + 0.02 * i);
  // snr[mode][alpha] over presets; undefined outputs count as -inf.
  std::vector<std::vector<double>> snr[2];
  for (int mode = 0; mode < 2; ++mode) {
    snr[mode].assign(alphas.size(), {});
    for (const SpeakerPreset& p : SpeakerPresets()) {
      PipelineConfig c;
      c.ApplyPreset(p.name);
      c.duration_s = 60.0;
      c.skip_demix = mode == 1;
      const std::vector<SweepRow> rows = SweepVad(c, alphas);
      for (size_t i = 0; i < rows.size(); ++i) {
        snr[mode][i].push_back(rows[i].snr_out.ok() ? *rows[i].snr_out.db : -INFINITY);
      }
    }
  }
  bool pass = true;
  std::ostringstream detail;
  for (size_t i = 0; i < alphas.size(); ++i) {
    const double demix = testing::Median(snr[0][i]);
    const double mic = testing::Median(snr[1][i]);
    pass = pass && demix >= mic;
    detail << Num(alphas[i], 2) << ":" << Num(demix, 3) << "/" << Num(mic, 3) << " ";
  }
  return {pass, "median SNR_out demix/mic per alpha: " + detail.str()};
}

Outcome SimulatedAad() {
  PipelineConfig c;
  c.duration_s = 1200.0;
  const SceneData scene = BuildScene(c, false);
  const EnvelopeData demixed = ComputeEnvelopes(c, scene);
  const AadOutcome a_demix = RunAad(c, demixed);
  c.skip_demix = true;
  const EnvelopeData mic = ComputeEnvelopes(c, scene);
  const AadOutcome a_mic = RunAad(c, mic);
  const double clean = *a_demix.accuracy_clean;
  const double dm = *a_demix.accuracy;
  const double mc = *a_mic.accuracy;
  const bool pass = clean >= 0.85 && clean <= 1.0 && std::abs(dm - clean) <= 0.15 + 1e-12 &&
                    std::abs(mc - dm) <= 0.10 + 1e-12 && a_demix.decisions.size() == 40;
  return {pass, std::to_string(a_demix.decisions.size()) + " frames, clean " + Num(clean) +
                    ", demixed " + Num(dm) + ", microphone " + Num(mc)};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome Determinism(const std::string& cli) {
  const fs::path base =
      fs::temp_directory_path() / ("neurosteer_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(base);
  const fs::path config = base / "run.ini";
  std::ofstream(config) << "[run]\nseed = 7\nduration_s = 120\n[scene]\npreset = pm60\n";
  for (const char* dir : {"a", "b"}) {
    const std::string cmd = "\"" + cli + "\" pipeline --config \"" + config.string() +
                            "\" --out \"" + (base / dir).string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "pipeline run failed: " + cmd};
  }
  int files = 0;
  bool same = true;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    if (entry.path().extension() != ".csv") continue;
    ++files;
    same = same && Slurp(entry.path()) == Slurp(base / "b" / entry.path().filename());
  }
  fs::remove_all(base);
  return {same && files > 0, std::to_string(files) + " CSV files compared"};
}

Outcome StftRoundTrip() {
  Rng rng(1111);
  const double rate = kDefaultMwfRateHz;
  const auto n = static_cast<Eigen::Index>(10 * rate);
  const ChannelMatrix x = testing::RandomMatrix(rng, 1, n);
  const AudioBuffer y = WolaSynthesize(Stft(x, rate, kDefaultFftLen, kDefaultHop));
  double worst = 0.0;
  for (Eigen::Index i = kDefaultFftLen; i < y.length() - kDefaultFftLen; ++i) {
    worst = std::max(worst, std::abs(y.samples(0, i) - x(0, i)));
  }
  return {worst < 1e-8, "max interior error " + Num(worst)};
}

}  // namespace
}  // namespace neurosteer

int main(int argc, char** argv) {
  using neurosteer::Outcome;
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <neurosteer cli> [criteria...]\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"least-squares decoder vs SVD oracle", neurosteer::LeastSquaresOracle},
      {"lag-matrix reconstruction vs double sum", neurosteer::LagReconstruction},
      {"M-NICA separation on generator G", neurosteer::MnicaSeparation},
      {"delta r_HL rises with angular separation", neurosteer::DeltaRTrend},
      {"noise field lowers best-mic SNR_in by 3 +/- 1 dB", neurosteer::NoiseOffset},
      {"GEVD rank-1 recovery and Wiener weights", neurosteer::MwfRank1},
      {"end-to-end enhancement at +/-90 deg", neurosteer::EndToEnd},
      {"demixed VAD beats microphone VAD across alpha", neurosteer::VadOrdering},
      {"AAD accuracy on simulated EEG", neurosteer::SimulatedAad},
      {"pipeline determinism", [&] { return neurosteer::Determinism(cli); }},
      {"STFT/WOLA round trip", neurosteer::StftRoundTrip},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.contains(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
