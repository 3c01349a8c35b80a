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

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "neurosteer/errors.h"

namespace neurosteer {
namespace {

std::string JoinRow(const CsvRow& row) {
  std::string line;
  for (size_t i = 0; i < row.size(); ++i) {
    if (i > 0) line += ',';
    line += row[i];
  }
  return line;
}

CsvRow SplitLine(const std::string& line) {
  CsvRow row;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) row.push_back(cell);
  if (!line.empty() && line.back() == ',') row.emplace_back();
  return row;
}

// Two-line preamble `name1,name2` / `value1,value2` followed by data rows.
struct Preamble {
  CsvRow values;
  std::vector<CsvRow> rows;
};

Preamble ReadWithPreamble(const std::string& path, const CsvRow& names) {
  std::vector<CsvRow> all = ReadCsv(path);
  if (all.size() < 2 || all[0] != names || all[1].size() != names.size()) {
    throw IoError("'" + path + "' lacks the " + JoinRow(names) + " header");
  }
  Preamble p;
  p.values = all[1];
  p.rows.assign(all.begin() + 2, all.end());
  return p;
}

ChannelMatrix RowsToChannels(const std::vector<CsvRow>& rows, size_t channels,
                             const std::string& path) {
  ChannelMatrix m(channels, rows.size());
  for (size_t t = 0; t < rows.size(); ++t) {
    if (rows[t].size() != channels) {
      throw IoError("'" + path + "' row " + std::to_string(t + 3) +
                    " has the wrong column count");
    }
    for (size_t c = 0; c < channels; ++c) m(c, t) = ParseNumber(rows[t][c]);
  }
  return m;
}

std::vector<CsvRow> ChannelsToRows(const ChannelMatrix& m) {
  std::vector<CsvRow> rows(m.cols());
  for (Eigen::Index t = 0; t < m.cols(); ++t) {
    rows[t].reserve(m.rows());
    for (Eigen::Index c = 0; c < m.rows(); ++c) rows[t].push_back(FormatNumber(m(c, t)));
  }
  return rows;
}

void WriteWithPreamble(const std::string& path, const CsvRow& names,
                       const CsvRow& values, const std::vector<CsvRow>& rows) {
  std::vector<CsvRow> all;
  all.reserve(rows.size() + 1);
  all.push_back(values);
  all.insert(all.end(), rows.begin(), rows.end());
  WriteCsv(path, names, all);
}

}  // namespace

std::string FormatNumber(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string FormatFixed(double v, int decimals) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

double ParseNumber(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw IoError("malformed number '" + text + "'");
  }
  return v;
}

void WriteCsv(const std::string& path, const CsvRow& header,
              const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << JoinRow(header) << '\n';
  for (const CsvRow& row : rows) out << JoinRow(row) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<CsvRow> ReadCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<CsvRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(SplitLine(line));
  }
  return rows;
}

void WriteEnvelopeCsv(const std::string& path, const EnvelopeMatrix& env) {
  WriteWithPreamble(path, {"rate_hz", "kind"},
                    {FormatNumber(env.rate_hz), EnvelopeKindName(env.kind)},
                    ChannelsToRows(env.values));
}

EnvelopeMatrix ReadEnvelopeCsv(const std::string& path) {
  const Preamble p = ReadWithPreamble(path, {"rate_hz", "kind"});
  EnvelopeMatrix env;
  env.rate_hz = ParseNumber(p.values[0]);
  try {
    env.kind = ParseEnvelopeKind(p.values[1]);
  } catch (const ParameterError& e) {
    throw IoError("'" + path + "': " + e.what());
  }
  const size_t channels = p.rows.empty() ? 0 : p.rows[0].size();
  env.values = RowsToChannels(p.rows, channels, path);
  return env;
}

void WriteEegCsv(const std::string& path, const EegRecording& eeg) {
  WriteWithPreamble(path, {"rate_hz", "kappa"},
                    {FormatNumber(eeg.rate_hz), std::to_string(eeg.kappa())},
                    ChannelsToRows(eeg.values));
}

EegRecording ReadEegCsv(const std::string& path) {
  const Preamble p = ReadWithPreamble(path, {"rate_hz", "kappa"});
  EegRecording eeg;
  eeg.rate_hz = ParseNumber(p.values[0]);
  const double kappa = ParseNumber(p.values[1]);
  if (kappa < 1 || kappa != static_cast<int>(kappa)) {
    throw IoError("'" + path + "' has an invalid channel count");
  }
  eeg.values = RowsToChannels(p.rows, static_cast<size_t>(kappa), path);
  return eeg;
}

void WriteLabelsCsv(const std::string& path, const std::vector<int>& labels) {
  std::vector<CsvRow> rows;
  for (size_t f = 0; f < labels.size(); ++f) {
    rows.push_back({std::to_string(f), std::to_string(labels[f])});
  }
  WriteCsv(path, {"frame", "label"}, rows);
}

std::vector<int> ReadLabelsCsv(const std::string& path) {
  const std::vector<CsvRow> all = ReadCsv(path);
  if (all.empty() || all[0] != CsvRow{"frame", "label"}) {
    throw IoError("'" + path + "' lacks the frame,label header");
  }
  std::vector<int> labels;
  for (size_t i = 1; i < all.size(); ++i) {
    if (all[i].size() != 2) throw IoError("'" + path + "' has a malformed row");
    const double label = ParseNumber(all[i][1]);
    if (label != 1.0 && label != 2.0) {
      throw IoError("'" + path + "' row " + std::to_string(i + 1) +
                    ": label must be 1 or 2");
    }
    labels.push_back(static_cast<int>(label));
  }
  return labels;
}

void WriteDecisionsCsv(const std::string& path,
                       const std::vector<AadDecision>& decisions) {
  std::vector<CsvRow> rows;
  for (const AadDecision& d : decisions) {
    rows.push_back({std::to_string(d.frame_index), std::to_string(d.chosen),
                    FormatNumber(d.r_a), FormatNumber(d.r_u)});
  }
  WriteCsv(path, {"frame", "chosen", "r_A", "r_U"}, rows);
}

std::vector<AadDecision> ReadDecisionsCsv(const std::string& path) {
  const std::vector<CsvRow> all = ReadCsv(path);
  if (all.empty() || all[0] != CsvRow{"frame", "chosen", "r_A", "r_U"}) {
    throw IoError("'" + path + "' lacks the frame,chosen,r_A,r_U header");
  }
  std::vector<AadDecision> out;
  for (size_t i = 1; i < all.size(); ++i) {
    if (all[i].size() != 4) throw IoError("'" + path + "' has a malformed row");
    AadDecision d;
    d.frame_index = static_cast<int>(ParseNumber(all[i][0]));
    d.chosen = static_cast<int>(ParseNumber(all[i][1]));
    if (d.chosen != 1 && d.chosen != 2) {
      throw IoError("'" + path + "' row " + std::to_string(i + 1) +
                    ": chosen must be 1 or 2");
    }
    d.r_a = ParseNumber(all[i][2]);
    d.r_u = ParseNumber(all[i][3]);
    out.push_back(d);
  }
  return out;
}

void WriteDecoderCsv(const std::string& path, const Decoder& decoder) {
  std::vector<CsvRow> rows;
  for (Eigen::Index i = 0; i < decoder.weights.size(); ++i) {
    rows.push_back({FormatNumber(decoder.weights(i))});
  }
  WriteWithPreamble(path, {"kappa", "tau_max"},
                    {std::to_string(decoder.kappa), std::to_string(decoder.tau_max)},
                    rows);
}

Decoder ReadDecoderCsv(const std::string& path) {
  const Preamble p = ReadWithPreamble(path, {"kappa", "tau_max"});
  Decoder d;
  d.kappa = static_cast<int>(ParseNumber(p.values[0]));
  d.tau_max = static_cast<int>(ParseNumber(p.values[1]));
  d.weights.resize(static_cast<Eigen::Index>(p.rows.size()));
  for (size_t i = 0; i < p.rows.size(); ++i) {
    if (p.rows[i].size() != 1) throw IoError("'" + path + "' has a malformed row");
    d.weights(static_cast<Eigen::Index>(i)) = ParseNumber(p.rows[i][0]);
  }
  if (d.weights.size() != static_cast<Eigen::Index>(d.kappa) * (d.tau_max + 1)) {
    throw IoError("'" + path + "' weight count does not match kappa and tau_max");
  }
  return d;
}

void WriteFilterBankCsv(const std::string& path, const SpectralFilterBank& bank) {
  std::vector<CsvRow> rows;
  for (int b = 0; b < bank.bins(); ++b) {
    for (int m = 0; m < bank.mics(); ++m) {
      rows.push_back({std::to_string(b), std::to_string(m),
                      FormatNumber(bank.weights[b](m).real()),
                      FormatNumber(bank.weights[b](m).imag())});
    }
  }
  WriteCsv(path, {"bin", "mic", "real", "imag"}, rows);
}

SpectralFilterBank ReadFilterBankCsv(const std::string& path) {
  const std::vector<CsvRow> all = ReadCsv(path);
  if (all.empty() || all[0] != CsvRow{"bin", "mic", "real", "imag"}) {
    throw IoError("'" + path + "' lacks the bin,mic,real,imag header");
  }
  int bins = 0, mics = 0;
  std::vector<std::array<double, 4>> entries;
  for (size_t i = 1; i < all.size(); ++i) {
    if (all[i].size() != 4) throw IoError("'" + path + "' has a malformed row");
    std::array<double, 4> e;
    for (int k = 0; k < 4; ++k) e[k] = ParseNumber(all[i][k]);
    if (e[0] < 0 || e[1] < 0) throw IoError("'" + path + "' has a negative index");
    bins = std::max(bins, static_cast<int>(e[0]) + 1);
    mics = std::max(mics, static_cast<int>(e[1]) + 1);
    entries.push_back(e);
  }
  if (entries.size() != static_cast<size_t>(bins) * mics) {
    throw IoError("'" + path + "' does not hold a complete filter bank");
  }
  SpectralFilterBank bank = SpectralFilterBank::Zero(bins, mics);
  for (const auto& e : entries) {
    bank.weights[static_cast<int>(e[0])](static_cast<int>(e[1])) = {e[2], e[3]};
  }
  return bank;
}

}  // namespace neurosteer
