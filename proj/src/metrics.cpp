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
#include "cdlink/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>

#include "cdlink/error.hpp"

namespace cdlink {

namespace {

// Shortest round-trip decimal form, so CSVs are stable and lossless.
std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  for (int precision = 1; precision <= 17; ++precision) {
    char shorter[32];
    std::snprintf(shorter, sizeof shorter, "%.*g", precision, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

void require_same_shape(const BinaryMap& a, const BinaryMap& b, const BinaryMap* subset) {
  if (a.shape() != b.shape() || (subset && subset->shape() != a.shape())) {
    throw DataError("maps must share one geometry");
  }
}

}  // namespace

double ConfusionCounts::tpr() const noexcept {
  return tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
}

double ConfusionCounts::fpr() const noexcept {
  return fp + tn ? static_cast<double>(fp) / static_cast<double>(fp + tn) : 0.0;
}

ConfusionCounts confusion(const BinaryMap& prediction, const BinaryMap& truth, const BinaryMap* subset) {
  require_same_shape(prediction, truth, subset);
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.values().size(); ++i) {
    if (subset && !subset->at_index(i)) continue;
    const bool p = prediction.at_index(i);
    const bool t = truth.at_index(i);
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

RocCurve roc_auc(const ScoreMap& scores, const BinaryMap& truth, const BinaryMap* subset) {
  if (scores.shape() != truth.shape() || (subset && subset->shape() != truth.shape())) {
    throw DataError("scores, truth and subset must share one geometry");
  }
  std::vector<std::pair<double, bool>> items;
  for (std::size_t i = 0; i < truth.values().size(); ++i) {
    if (subset && !subset->at_index(i)) continue;
    items.emplace_back(scores.at_index(i), truth.at_index(i));
  }
  const auto pos = static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](auto& p) { return p.second; }));
  const std::size_t neg = items.size() - pos;
  if (pos == 0 || neg == 0) throw DataError("ROC needs both changed and unchanged pixels");

  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  RocCurve roc;
  roc.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  double auc = 0.0;
  for (std::size_t i = 0; i < items.size();) {
    const double threshold = items[i].first;
    for (; i < items.size() && items[i].first == threshold; ++i) {
      if (items[i].second) ++tp;
      else ++fp;
    }
    const RocPoint next{threshold, static_cast<double>(fp) / static_cast<double>(neg),
                        static_cast<double>(tp) / static_cast<double>(pos)};
    const RocPoint& prev = roc.points.back();
    auc += (next.fpr - prev.fpr) * (next.tpr + prev.tpr) / 2.0;
    roc.points.push_back(next);
  }
  roc.auc = auc;
  return roc;
}

double psnr(const BandStack& a, const BandStack& b, double max_value) {
  if (a.shape() != b.shape() || a.bands() != b.bands()) throw DataError("PSNR inputs differ in geometry");
  if (!(max_value > 0.0)) throw ConfigError("PSNR max_value must be positive");
  double ss = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) {
    const double d = a.samples()[i] - b.samples()[i];
    ss += d * d;
  }
  if (ss == 0.0) return kInfinitePsnr;
  const double mse = ss / static_cast<double>(a.samples().size());
  return 10.0 * std::log10(max_value * max_value / mse);
}

std::string format_psnr(double db) { return std::isinf(db) ? "inf" : fmt(db); }

std::vector<DownloadPoint> cumulative_download_curve(const ScoreMap& scores) {
  std::vector<double> sorted(scores.values().begin(), scores.values().end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double n = static_cast<double>(sorted.size());
  std::vector<DownloadPoint> curve;
  for (std::size_t i = 0; i < sorted.size();) {
    const double threshold = sorted[i];
    while (i < sorted.size() && sorted[i] == threshold) ++i;
    curve.push_back({threshold, static_cast<double>(i) / n});
  }
  return curve;
}

double download_fraction(const ScoreMap& scores, double tau) {
  const auto n = std::count_if(scores.values().begin(), scores.values().end(), [tau](double s) { return s >= tau; });
  return static_cast<double>(n) / static_cast<double>(scores.values().size());
}

ScoreHistograms score_histograms(const ScoreMap& scores, const BinaryMap& truth, std::size_t n_bins) {
  if (n_bins < 1) throw ConfigError("histograms need at least one bin");
  if (scores.shape() != truth.shape()) throw DataError("scores and truth must share one geometry");
  ScoreHistograms h;
  h.changed.assign(n_bins, 0.0);
  h.unchanged.assign(n_bins, 0.0);
  for (std::size_t k = 0; k <= n_bins; ++k) h.bin_edges.push_back(static_cast<double>(k) / static_cast<double>(n_bins));

  for (std::size_t i = 0; i < truth.values().size(); ++i) {
    const double s = scores.at_index(i);
    const auto bin = std::min(n_bins - 1, static_cast<std::size_t>(s * static_cast<double>(n_bins)));
    if (truth.at_index(i)) {
      h.changed[bin] += 1.0;
      ++h.n_changed;
    } else {
      h.unchanged[bin] += 1.0;
      ++h.n_unchanged;
    }
  }
  for (auto* hist : {&h.changed, &h.unchanged}) {
    const double total = std::accumulate(hist->begin(), hist->end(), 0.0);
    if (total > 0.0) {
      for (double& v : *hist) v /= total;
    }
  }
  return h;
}

std::string roc_csv(const RocCurve& roc) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : roc.points) out += fmt(p.threshold) + "," + fmt(p.fpr) + "," + fmt(p.tpr) + "\n";
  return out;
}

std::string download_csv(const std::vector<DownloadPoint>& curve) {
  std::string out = "threshold,fraction\n";
  for (const auto& p : curve) out += fmt(p.threshold) + "," + fmt(p.fraction) + "\n";
  return out;
}

std::string histograms_csv(const ScoreHistograms& h) {
  std::string out = "bin_low,bin_high,changed,unchanged\n";
  for (std::size_t k = 0; k < h.changed.size(); ++k) {
    out += fmt(h.bin_edges[k]) + "," + fmt(h.bin_edges[k + 1]) + "," + fmt(h.changed[k]) + "," + fmt(h.unchanged[k]) + "\n";
  }
  return out;
}

}  // namespace cdlink
