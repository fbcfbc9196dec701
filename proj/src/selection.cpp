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
#include "cdlink/selection.hpp"

#include <algorithm>
#include <bit>
#include <optional>

#include "cdlink/error.hpp"

namespace cdlink {

std::string to_string(CoordinateOverhead mode) {
  switch (mode) {
    case CoordinateOverhead::none: return "none";
    case CoordinateOverhead::coord_list: return "coord_list";
    case CoordinateOverhead::bitmap: return "bitmap";
  }
  return "?";
}

CoordinateOverhead parse_coordinate_overhead(const std::string& name) {
  if (name == "none") return CoordinateOverhead::none;
  if (name == "coord_list") return CoordinateOverhead::coord_list;
  if (name == "bitmap") return CoordinateOverhead::bitmap;
  throw ConfigError("unknown coordinate_overhead '" + name + "'");
}

void VolumeConfig::validate() const {
  if (bands_per_pixel < 1) throw ConfigError("bands_per_pixel must be at least 1");
  if (bits_per_sample < 1) throw ConfigError("bits_per_sample must be at least 1");
}

namespace {

// ceil(log2(n)) for n >= 1.
std::uint64_t ceil_log2(std::size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

}  // namespace

std::uint64_t data_volume(const BinaryMap& alpha, const VolumeConfig& config) {
  config.validate();
  const std::uint64_t k = alpha.count();
  std::uint64_t bits = k * config.bands_per_pixel * config.bits_per_sample;
  switch (config.coordinate_overhead) {
    case CoordinateOverhead::none: break;
    case CoordinateOverhead::coord_list:
      bits += k * (ceil_log2(alpha.shape().height) + ceil_log2(alpha.shape().width));
      break;
    case CoordinateOverhead::bitmap: bits += alpha.shape().pixels(); break;
  }
  return bits;
}

Selection build_selection(const BinaryMap& prediction, const VolumeConfig& config) {
  return Selection{prediction, data_volume(prediction, config)};
}

Selection solve_p1_oracle(const BinaryMap& truth, const VolumeConfig& config) {
  return Selection{truth, data_volume(truth, config)};
}

Selection brute_force_p1(const BinaryMap& truth, const EnergyFunction& energy, const VolumeConfig& config) {
  const std::size_t n = truth.shape().pixels();
  if (n > kBruteForceMaxPixels) {
    throw ConfigError("brute force limited to " + std::to_string(kBruteForceMaxPixels) + " pixels, got " +
                      std::to_string(n));
  }
  std::vector<std::size_t> free_pixels;
  for (std::size_t i = 0; i < n; ++i) {
    if (!truth.at_index(i)) free_pixels.push_back(i);
  }

  std::optional<BinaryMap> best;
  double best_energy = 0.0;
  const std::uint64_t candidates = std::uint64_t{1} << free_pixels.size();
  for (std::uint64_t subset = 0; subset < candidates; ++subset) {
    BinaryMap alpha = truth;
    for (std::size_t k = 0; k < free_pixels.size(); ++k) {
      if (subset >> k & 1U) alpha.set_index(free_pixels[k], true);
    }
    const double e = energy(alpha);
    bool better = !best || e < best_energy;
    if (best && e == best_energy) {
      const auto a = alpha.count();
      const auto b = best->count();
      better = a < b || (a == b && std::lexicographical_compare(alpha.values().begin(), alpha.values().end(),
                                                                best->values().begin(), best->values().end()));
    }
    if (better) {
      best = std::move(alpha);
      best_energy = e;
    }
  }
  return Selection{*best, data_volume(*best, config)};
}

std::vector<TransmittedPixel> transmission_set(const BandStack& observed, const BinaryMap& alpha) {
  if (observed.shape() != alpha.shape()) throw DataError("selection does not match image geometry");
  std::vector<TransmittedPixel> out;
  out.reserve(alpha.count());
  for (std::size_t r = 0; r < observed.height(); ++r) {
    for (std::size_t c = 0; c < observed.width(); ++c) {
      if (alpha.at(r, c)) out.push_back({r, c, observed.pixel(r, c)});
    }
  }
  return out;
}

}  // namespace cdlink
