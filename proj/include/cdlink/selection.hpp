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
#include <functional>
#include <string>
#include <vector>

#include "cdlink/raster.hpp"

namespace cdlink {

/// Side information sent with the selected pixels so the ground can place them.
enum class CoordinateOverhead { none, coord_list, bitmap };

std::string to_string(CoordinateOverhead mode);
CoordinateOverhead parse_coordinate_overhead(const std::string& name);

struct VolumeConfig {
  std::size_t bands_per_pixel = 1;  // D
  std::size_t bits_per_sample = BandStack::kDefaultBitDepth;
  CoordinateOverhead coordinate_overhead = CoordinateOverhead::none;

  void validate() const;
};

/// Transmission decision alpha and its cached data volume.
struct Selection {
  BinaryMap alpha;
  std::uint64_t volume_bits = 0;
};

/// sum(alpha) * D * b plus the coordinate overhead:
///   coord_list -> sum(alpha) * (ceil(log2 H) + ceil(log2 W)),  bitmap -> H * W.
std::uint64_t data_volume(const BinaryMap& alpha, const VolumeConfig& config);

/// Minimal feasible decision alpha = prediction.
Selection build_selection(const BinaryMap& prediction, const VolumeConfig& config);

/// Closed-form optimum of the energy minimization with known change map: alpha = truth.
Selection solve_p1_oracle(const BinaryMap& truth, const VolumeConfig& config);

using EnergyFunction = std::function<double(const BinaryMap& alpha)>;

/// Exhaustive search over every alpha >= truth. Ties go to fewer selected pixels,
/// then to the lexicographically smaller row-major alpha. Limited to 16 pixels.
Selection brute_force_p1(const BinaryMap& truth, const EnergyFunction& energy, const VolumeConfig& config);

inline constexpr std::size_t kBruteForceMaxPixels = 16;

/// The transmission set: full spectral vectors of every selected pixel, row-major.
std::vector<TransmittedPixel> transmission_set(const BandStack& observed, const BinaryMap& alpha);

}  // namespace cdlink
