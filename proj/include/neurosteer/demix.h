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

#ifndef NEUROSTEER_DEMIX_H_
#define NEUROSTEER_DEMIX_H_

#include <vector>

#include <Eigen/Core>

#include "neurosteer/audio_buffer.h"
#include "neurosteer/envelope.h"

namespace neurosteer {

inline constexpr int kDefaultMnicaIterations = 100;

struct DemixResult {
  // S x frames, energy kind, non-negative.
  EnvelopeMatrix sources;
  int iterations_run = 0;
  // Absolute centered correlation between output rows (unit diagonal).
  Eigen::MatrixXd pairwise_corr;
  // Input rows used as the starting point, and their mean pairwise |corr|.
  std::vector<int> initial_rows;
  double initial_mean_abs_corr = 0.0;
};

// Non-negative blind separation of K energy envelopes into S sources by
// alternating symmetric decorrelation (with clamping) and projection onto the
// S-dimensional principal row subspace of the input. Starts from the S input
// rows with the smallest mean pairwise |corr|. Each output row is finally
// shifted so its minimum is zero.
//
// Throws ParameterError when S > K, S < 1, frames < 10 S or the input is not
// an energy envelope, and NumericalError when the input has rank below S.
DemixResult Mnica(const EnvelopeMatrix& envelopes, int num_sources,
                  int iterations = kDefaultMnicaIterations);

// Mean |corr| over distinct row pairs; 0 for fewer than two rows.
double MeanPairwiseAbsCorr(const ChannelMatrix& rows);

struct SourceMatch {
  // permutation[s] is the demixed row assigned to reference row s.
  std::vector<int> permutation;
  std::vector<double> correlations;
  double total = 0.0;
};

// Assignment of demixed rows to reference rows that maximizes the summed
// Pearson correlation, by exhaustive search over permutations.
SourceMatch MatchSources(const ChannelMatrix& demixed,
                         const ChannelMatrix& references);

// Number of singular values of the centered envelopes before the first drop
// by more than `ratio_threshold`. Diagnostic only.
int EstimateSourceCount(const EnvelopeMatrix& envelopes,
                        double ratio_threshold = 10.0);

}  // namespace neurosteer

#endif  // NEUROSTEER_DEMIX_H_
