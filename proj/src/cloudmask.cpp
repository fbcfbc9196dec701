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
#include "cdlink/cloudmask.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cdlink/error.hpp"
#include "cdlink/io.hpp"
#include "cdlink/parallel.hpp"

namespace cdlink {

void CloudConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("cloud gamma must lie in (0, 1)");
  if (!(brightness_low < brightness_high)) throw ConfigError("brightness_low must be below brightness_high");
}

ScoreMap detect_clouds_baseline(const BandStack& rgbnir, const CloudConfig& config, std::size_t threads) {
  config.validate();
  static const std::array<std::string, 4> kBands = {"R", "G", "B", "Nir"};
  if (rgbnir.bands() != kBands.size()) {
    throw DataError("cloud detection needs exactly the R, G, B, Nir bands, got " + std::to_string(rgbnir.bands()));
  }
  std::array<std::span<const double>, 4> planes;
  for (std::size_t k = 0; k < kBands.size(); ++k) {
    const auto index = rgbnir.band_index(kBands[k]);
    if (!index) throw DataError("cloud detection input lacks band '" + kBands[k] + "'");
    planes[k] = rgbnir.plane(*index);
  }

  const double span = config.brightness_high - config.brightness_low;
  std::vector<double> prob(rgbnir.shape().pixels());
  detail::parallel_for(prob.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double mean = (planes[0][i] + planes[1][i] + planes[2][i] + planes[3][i]) / 4.0;
      prob[i] = std::clamp((mean - config.brightness_low) / span, 0.0, 1.0);
    }
  });
  return ScoreMap(rgbnir.shape(), std::move(prob));
}

ScoreMap load_cloud_probability(const std::filesystem::path& path, std::optional<Shape> expected) {
  return load_score_map(path, expected);
}

BinaryMap binarize(const ScoreMap& prob, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
  std::vector<std::uint8_t> out(prob.values().size());
  std::transform(prob.values().begin(), prob.values().end(), out.begin(),
                 [gamma](double p) { return static_cast<std::uint8_t>(p >= gamma); });
  return BinaryMap(prob.shape(), std::move(out));
}

BandStack apply_mask(const BandStack& stack, const BinaryMap& cloud) {
  if (stack.shape() != cloud.shape()) {
    throw DataError("cloud mask is " + to_string(cloud.shape()) + ", image is " + to_string(stack.shape()));
  }
  const std::size_t n = stack.shape().pixels();
  std::vector<double> samples(stack.samples().begin(), stack.samples().end());
  for (std::size_t b = 0; b < stack.bands(); ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      if (cloud.at_index(i)) samples[b * n + i] = 0.0;
    }
  }
  return BandStack(stack.shape(), stack.band_labels(), std::move(samples), stack.bit_depth());
}

BinaryMap mask_union(const BinaryMap& a, const BinaryMap& b) {
  if (a.shape() != b.shape()) throw DataError("cannot merge masks of different shapes");
  std::vector<std::uint8_t> out(a.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] | b.values()[i];
  return BinaryMap(a.shape(), std::move(out));
}

}  // namespace cdlink
