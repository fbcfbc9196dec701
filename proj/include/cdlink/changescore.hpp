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

#include <filesystem>
#include <optional>
#include <string>

#include "cdlink/raster.hpp"

namespace cdlink {

enum class ScorerKind { baseline_distance, external_file };

std::string to_string(ScorerKind kind);
ScorerKind parse_scorer_kind(const std::string& name);

struct ScorerConfig {
  ScorerKind kind = ScorerKind::baseline_distance;
  std::optional<std::filesystem::path> external_path;
  double masked_pixel_score = 0.0;

  void validate() const;
};

/// Threshold chosen against a labeled set, plus the miss rate it achieves there.
struct CalibrationResult {
  double tau = 0.0;
  double achieved_miss_rate = 0.0;
  std::size_t n_changed = 0;
  std::size_t allowed_misses = 0;  // floor(epsilon * n_changed)
  std::size_t misses = 0;
};

/// Euclidean spectral distance between the two images, divided by its maximum
/// over cloud-free pixels. Cloud pixels get `masked_pixel_score`. All-zero
/// distances give an all-zero map.
ScoreMap score_changes_baseline(const BandStack& reference, const BandStack& observed, const BinaryMap& cloud,
                                double masked_pixel_score = 0.0, std::size_t threads = 1);

/// Overrides the score of every cloud pixel.
ScoreMap mask_scores(const ScoreMap& scores, const BinaryMap& cloud, double masked_pixel_score);

/// Threshold segmentation: 1 where score >= tau.
BinaryMap segment(const ScoreMap& scores, double tau);

/// Largest tau whose segmentation misses at most floor(epsilon * n) of the n
/// changed pixels. With `subset`, only pixels where subset = 1 take part.
CalibrationResult calibrate_threshold(const ScoreMap& scores, const BinaryMap& truth, double epsilon,
                                      const BinaryMap* subset = nullptr);

/// Fraction of changed pixels (optionally restricted to `subset`) that
/// `prediction` leaves unselected, with the count of changed pixels.
std::pair<double, std::size_t> miss_rate(const BinaryMap& prediction, const BinaryMap& truth,
                                         const BinaryMap* subset = nullptr);

}  // namespace cdlink
