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

#ifndef NEUROSTEER_CSV_IO_H_
#define NEUROSTEER_CSV_IO_H_

#include <string>
#include <vector>

#include "neurosteer/aad.h"
#include "neurosteer/envelope.h"
#include "neurosteer/mwf.h"

namespace neurosteer {

using CsvRow = std::vector<std::string>;

// Shortest decimal text that round-trips to the same double.
std::string FormatNumber(double v);
// Fixed-point with `decimals` digits.
std::string FormatFixed(double v, int decimals);
double ParseNumber(const std::string& text);

// Comma-separated, LF line endings, no quoting. Throws IoError.
void WriteCsv(const std::string& path, const CsvRow& header,
              const std::vector<CsvRow>& rows);
std::vector<CsvRow> ReadCsv(const std::string& path);

// Line 1 `rate_hz,kind`, line 2 their values, then one row per frame with one
// column per channel.
void WriteEnvelopeCsv(const std::string& path, const EnvelopeMatrix& env);
EnvelopeMatrix ReadEnvelopeCsv(const std::string& path);

// Line 1 `rate_hz,kappa`, line 2 their values, then one row per sample.
void WriteEegCsv(const std::string& path, const EegRecording& eeg);
EegRecording ReadEegCsv(const std::string& path);

// `frame,label` per AAD frame.
void WriteLabelsCsv(const std::string& path, const std::vector<int>& labels);
std::vector<int> ReadLabelsCsv(const std::string& path);

// `frame,chosen,r_A,r_U`.
void WriteDecisionsCsv(const std::string& path,
                       const std::vector<AadDecision>& decisions);
std::vector<AadDecision> ReadDecisionsCsv(const std::string& path);

// `weight` (all weights stacked channel-major, lag-minor) with the first two
// lines `kappa,tau_max` and their values.
void WriteDecoderCsv(const std::string& path, const Decoder& decoder);
Decoder ReadDecoderCsv(const std::string& path);

// `bin,mic,real,imag`.
void WriteFilterBankCsv(const std::string& path, const SpectralFilterBank& bank);
// The reference microphone is not stored and reads back as 0.
SpectralFilterBank ReadFilterBankCsv(const std::string& path);

}  // namespace neurosteer

#endif  // NEUROSTEER_CSV_IO_H_
