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
#include "cdlink/changescore.hpp"

#include <algorithm>
#include <cmath>

#include "cdlink/error.hpp"
#include "cdlink/parallel.hpp"

namespace cdlink {

std::string to_string(ScorerKind kind) {
  return kind == ScorerKind::baseline_distance ? "baseline_distance" : "external_file";
}

ScorerKind parse_scorer_kind(const std::string& name) {
  if (name == "baseline_distance") return ScorerKind::baseline_distance;
  if (name == "external_file") return ScorerKind::external_file;
  throw ConfigError("unknown scorer kind '" + name + "'");
}

void ScorerConfig::validate() const {
  if (!(masked_pixel_score >= 0.0 && masked_pixel_score <= 1.0)) {
    throw ConfigError("masked_pixel_score must lie in [0, 1]");
  }
  if ((kind == ScorerKind::external_file) != external_path.has_value()) {
    throw ConfigError("external_path must be given exactly when the scorer kind is external_file");
  }
}

ScoreMap score_changes_baseline(const BandStack& reference, const BandStack& observed, const BinaryMap& cloud,
                                double masked_pixel_score, std::size_t threads) {
  if (reference.shape() != observed.shape() || reference.bands() != observed.bands()) {
    throw DataError("reference and observed stacks differ in geometry");
  }
  if (cloud.shape() != reference.shape()) throw DataError("cloud mask does not match image geometry");
  if (!(masked_pixel_score >= 0.0 && masked_pixel_score <= 1.0)) {
    throw ConfigError("masked_pixel_score must lie in [0, 1]");
  }

  const std::size_t n = reference.shape().pixels();
  std::vector<double> dist(n, 0.0);
  detail::parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (cloud.at_index(i)) continue;
      double ss = 0.0;
      for (std::size_t b = 0; b < reference.bands(); ++b) {
        const double d = observed.plane(b)[i] - reference.plane(b)[i];
        ss += d * d;
      }
      dist[i] = std::sqrt(ss);
    }
  });

  double max_dist = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!cloud.at_index(i)) max_dist = std::max(max_dist, dist[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (cloud.at_index(i)) {
      dist[i] = masked_pixel_score;
    } else {
      dist[i] = max_dist > 0.0 ? std::min(1.0, dist[i] / max_dist) : 0.0;
    }
  }
  return ScoreMap(reference.shape(), std::move(dist));
}

ScoreMap mask_scores(const ScoreMap& scores, const BinaryMap& cloud, double masked_pixel_score) {
  if (scores.shape() != cloud.shape()) throw DataError("cloud mask does not match score map geometry");
  std::vector<double> out(scores.values().begin(), scores.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (cloud.at_index(i)) out[i] = masked_pixel_score;
  }
  return ScoreMap(scores.shape(), std::move(out));
}

BinaryMap segment(const ScoreMap& scores, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
  std::vector<std::uint8_t> out(scores.values().size());
  std::transform(scores.values().begin(), scores.values().end(), out.begin(),
                 [tau](double s) { return static_cast<std::uint8_t>(s >= tau); });
  return BinaryMap(scores.shape(), std::move(out));
}

std::pair<double, std::size_t> miss_rate(const BinaryMap& prediction, const BinaryMap& truth, const BinaryMap* subset) {
  if (prediction.shape() != truth.shape() || (subset && subset->shape() != truth.shape())) {
    throw DataError("prediction, truth and subset must share one geometry");
  }
  std::size_t changed = 0;
  std::size_t missed = 0;
  for (std::size_t i = 0; i < truth.values().size(); ++i) {
    if (subset && !subset->at_index(i)) continue;
    if (!truth.at_index(i)) continue;
    ++changed;
    if (!prediction.at_index(i)) ++missed;
  }
  const double rate = changed ? static_cast<double>(missed) / static_cast<double>(changed) : 0.0;
  return {rate, changed};
}

CalibrationResult calibrate_threshold(const ScoreMap& scores, const BinaryMap& truth, double epsilon,
                                      const BinaryMap* subset) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in [0, 1)");
  if (scores.shape() != truth.shape() || (subset && subset->shape() != truth.shape())) {
    throw DataError("scores, truth and subset must share one geometry");
  }

  // Changed-pixel scores in row-major order; stable sort keeps ties in pixel order.
  std::vector<double> changed;
  for (std::size_t i = 0; i < truth.values().size(); ++i) {
    if (subset && !subset->at_index(i)) continue;
    if (truth.at_index(i)) changed.push_back(scores.at_index(i));
  }
  if (changed.empty()) throw DataError("calibration set holds no changed pixels");
  std::stable_sort(changed.begin(), changed.end());

  CalibrationResult result;
  result.n_changed = changed.size();
  result.allowed_misses = std::min(
      changed.size() - 1, static_cast<std::size_t>(std::floor(epsilon * static_cast<double>(changed.size()))));
  result.tau = changed[result.allowed_misses];

  // Re-apply the segmentation rule rather than trusting the rank argument.
  result.misses = static_cast<std::size_t>(
      std::count_if(changed.begin(), changed.end(), [tau = result.tau](double s) { return !(s >= tau); }));
  result.achieved_miss_rate = static_cast<double>(result.misses) / static_cast<double>(result.n_changed);
  return result;
}

}  // namespace cdlink
