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

#include "neurosteer/demix.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "neurosteer/errors.h"
#include "neurosteer/stats.h"

namespace neurosteer {
namespace {

constexpr double kEigenFloor = 1e-8;
constexpr double kRankRatio = 1e6;

Eigen::VectorXd RowMeans(const Eigen::MatrixXd& m) { return m.rowwise().mean(); }

Eigen::VectorXd RowStd(const Eigen::MatrixXd& centered) {
  return (centered.rowwise().squaredNorm() / static_cast<double>(centered.cols()))
      .cwiseSqrt();
}

// Exhaustive search over S-subsets of the K rows.
std::vector<int> LeastCorrelatedRows(const ChannelMatrix& x, int count) {
  const int k = static_cast<int>(x.rows());
  Eigen::MatrixXd corr(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      corr(i, j) = std::abs(Pearson(RowSpan(x, i), RowSpan(x, j)));
    }
  }
  if (count == 1) {
    Eigen::Index best;
    (x.colwise() - RowMeans(x)).rowwise().squaredNorm().maxCoeff(&best);
    return {static_cast<int>(best)};
  }
  std::vector<bool> mask(k, false);
  std::fill(mask.begin(), mask.begin() + count, true);
  std::vector<int> best;
  double best_score = std::numeric_limits<double>::infinity();
  do {
    std::vector<int> rows;
    for (int i = 0; i < k; ++i) {
      if (mask[i]) rows.push_back(i);
    }
    double score = 0.0;
    for (size_t a = 0; a < rows.size(); ++a) {
      for (size_t b = a + 1; b < rows.size(); ++b) score += corr(rows[a], rows[b]);
    }
    if (score < best_score) {
      best_score = score;
      best = rows;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace

double MeanPairwiseAbsCorr(const ChannelMatrix& rows) {
  double acc = 0.0;
  int pairs = 0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < rows.rows(); ++j) {
      acc += std::abs(Pearson(RowSpan(rows, i), RowSpan(rows, j)));
      ++pairs;
    }
  }
  return pairs > 0 ? acc / pairs : 0.0;
}

DemixResult Mnica(const EnvelopeMatrix& envelopes, int num_sources,
                  int iterations) {
  if (envelopes.kind != EnvelopeKind::kEnergy) {
    throw ParameterError("M-NICA needs energy envelopes");
  }
  const int k = envelopes.channels();
  const Eigen::Index n = envelopes.frames();
  const int s = num_sources;
  if (s < 1 || s > k) {
    throw ParameterError("source count must be between 1 and the channel count");
  }
  if (n < 10 * static_cast<Eigen::Index>(s)) {
    throw ParameterError("M-NICA needs at least 10 frames per source");
  }
  if (iterations < 0) throw ParameterError("iteration count must be non-negative");

  const Eigen::MatrixXd x = envelopes.values;
  const Eigen::MatrixXd xc = x.colwise() - RowMeans(x);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(xc, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (!(sv(0) > 0.0) ||
      (s > 1 && sv(s - 1) * kRankRatio < sv(s - 2))) {
    throw NumericalError("envelopes have rank below the requested source count (" +
                         std::to_string(s) + ")");
  }
  // N x S basis of the principal row subspace.
  const Eigen::MatrixXd v = svd.matrixV().leftCols(s);

  DemixResult result;
  result.initial_rows = LeastCorrelatedRows(envelopes.values, s);
  Eigen::MatrixXd y(s, n);
  for (int i = 0; i < s; ++i) y.row(i) = x.row(result.initial_rows[i]);
  result.initial_mean_abs_corr = MeanPairwiseAbsCorr(y);

  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd mu = RowMeans(y);
    const Eigen::MatrixXd yc = y.colwise() - mu;
    const Eigen::VectorXd sd = RowStd(yc);
    const Eigen::MatrixXd cov = yc * yc.transpose() / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const double floor = kEigenFloor * std::max(eig.eigenvalues().maxCoeff(), 0.0);
    if (!(floor > 0.0)) break;  // all rows constant
    const Eigen::VectorXd inv_sqrt =
        eig.eigenvalues().cwiseMax(floor).cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd z = eig.eigenvectors() * inv_sqrt.asDiagonal() *
                        eig.eigenvectors().transpose() * yc;
    const Eigen::VectorXd zsd = RowStd(z);
    for (int i = 0; i < s; ++i) {
      const double g = zsd(i) > 0.0 ? sd(i) / zsd(i) : 0.0;
      z.row(i) = (z.row(i).array() * g + mu(i)).matrix();
    }
    z = z.cwiseMax(0.0);

    const Eigen::VectorXd m = RowMeans(z);
    const Eigen::MatrixXd zc = z.colwise() - m;
    y = ((zc * v) * v.transpose()).colwise() + m;
    y = y.cwiseMax(0.0);
    result.iterations_run = it + 1;
  }
  y = y.colwise() - y.rowwise().minCoeff();

  result.sources.kind = EnvelopeKind::kEnergy;
  result.sources.rate_hz = envelopes.rate_hz;
  result.sources.values = y;
  result.pairwise_corr = Eigen::MatrixXd::Identity(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = i + 1; j < s; ++j) {
      const double r = std::abs(Pearson(result.sources.channel(i), result.sources.channel(j)));
      result.pairwise_corr(i, j) = r;
      result.pairwise_corr(j, i) = r;
    }
  }
  return result;
}

SourceMatch MatchSources(const ChannelMatrix& demixed,
                         const ChannelMatrix& references) {
  if (demixed.cols() != references.cols()) {
    throw ParameterError("demixed and reference envelopes differ in length");
  }
  if (demixed.rows() != references.rows()) {
    throw ParameterError("demixed and reference source counts differ");
  }
  const int s = static_cast<int>(demixed.rows());
  Eigen::MatrixXd corr(s, s);  // corr(ref, demixed)
  for (int r = 0; r < s; ++r) {
    for (int d = 0; d < s; ++d) {
      corr(r, d) = Pearson(RowSpan(references, r), RowSpan(demixed, d));
    }
  }
  std::vector<int> perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  SourceMatch best;
  best.total = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int r = 0; r < s; ++r) total += corr(r, perm[r]);
    if (total > best.total) {
      best.total = total;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (int r = 0; r < s; ++r) best.correlations.push_back(corr(r, best.permutation[r]));
  return best;
}

int EstimateSourceCount(const EnvelopeMatrix& envelopes, double ratio_threshold) {
  const Eigen::MatrixXd x = envelopes.values;
  const Eigen::MatrixXd xc = x.colwise() - RowMeans(x);
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(xc).singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  for (Eigen::Index i = 0; i + 1 < sv.size(); ++i) {
    if (sv(i) > ratio_threshold * sv(i + 1)) return static_cast<int>(i + 1);
  }
  return static_cast<int>(sv.size());
}

}  // namespace neurosteer
