/**
 * Copyright 2026 The cdlink Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cdlink/raster.hpp"

namespace cdlink {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  double tpr() const noexcept;  // tp / (tp + fn), 0 when no positives
  double fpr() const noexcept;  // fp / (fp + tn), 0 when no negatives
};

/// Per-pixel counts, optionally restricted to pixels where subset = 1.
ConfusionCounts confusion(const BinaryMap& prediction, const BinaryMap& truth, const BinaryMap* subset = nullptr);

struct RocPoint {
  double threshold = 0.0;  // +inf for the leading (0, 0) point
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // thresholds descending
  double auc = 0.0;
};

/// Empirical ROC with one step per distinct score (ties grouped) and
/// trapezoidal AUC. Requires both classes to be present.
RocCurve roc_auc(const ScoreMap& scores, const BinaryMap& truth, const BinaryMap* subset = nullptr);

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// 10 log10(max^2 / MSE) over every sample; kInfinitePsnr for identical inputs.
double psnr(const BandStack& a, const BandStack& b, double max_value);

/// "inf" for an infinite PSNR, otherwise the number with full precision.
std::string format_psnr(double db);

struct DownloadPoint {
  double threshold = 0.0;
  double fraction = 0.0;
};

/// Fraction of pixels with score >= tau, for every distinct score, thresholds descending.
std::vector<DownloadPoint> cumulative_download_curve(const ScoreMap& scores);

/// Fraction of pixels with score >= tau.
double download_fraction(const ScoreMap& scores, double tau);

struct ScoreHistograms {
  std::vector<double> bin_edges;  // n_bins + 1 edges over [0, 1]
  std::vector<double> changed;    // normalized to sum 1 unless the class is empty
  std::vector<double> unchanged;
  std::size_t n_changed = 0;
  std::size_t n_unchanged = 0;

  bool changed_empty() const noexcept { return n_changed == 0; }
  bool unchanged_empty() const noexcept { return n_unchanged == 0; }
};

/// Class-conditional score histograms with equal-width bins; a score of
/// exactly 1 falls in the last bin.
ScoreHistograms score_histograms(const ScoreMap& scores, const BinaryMap& truth, std::size_t n_bins);

std::string roc_csv(const RocCurve& roc);
std::string download_csv(const std::vector<DownloadPoint>& curve);
std::string histograms_csv(const ScoreHistograms& h);

}  // namespace cdlink
