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

#include "cdlink/raster.hpp"

namespace cdlink {

struct CloudConfig {
  double gamma = 0.5;            // binarization threshold, in (0, 1)
  double brightness_low = 1.0;   // ramp start, z-score units
  double brightness_high = 2.0;  // ramp end, z-score units

  void validate() const;
};

/// Brightness-ramp stand-in for a learned cloud segmenter. Input must be the
/// normalized R, G, B, Nir stack; the probability is the clamped linear ramp
/// of the four-band mean between brightness_low and brightness_high.
ScoreMap detect_clouds_baseline(const BandStack& rgbnir, const CloudConfig& config, std::size_t threads = 1);

/// Reads a cloud probability map exported by any external model.
ScoreMap load_cloud_probability(const std::filesystem::path& path, std::optional<Shape> expected = std::nullopt);

/// 1 where prob >= gamma. gamma must lie in (0, 1).
BinaryMap binarize(const ScoreMap& prob, double gamma);

/// Zeroes every band of the pixels flagged as cloud.
BandStack apply_mask(const BandStack& stack, const BinaryMap& cloud);

BinaryMap mask_union(const BinaryMap& a, const BinaryMap& b);

}  // namespace cdlink
