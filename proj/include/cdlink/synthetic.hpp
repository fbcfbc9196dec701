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
#include <random>
#include <string>
#include <vector>

#include "cdlink/raster.hpp"

namespace cdlink {

/// Parameters of a synthetic coregistered image pair.
///
/// Generation is reproducible in any language. All randomness comes from one
/// std::mt19937_64 seeded with `seed` (the standard 64-bit Mersenne Twister,
/// MT19937-64), consumed in this exact order:
///
///  1. Reference: for band b, row i, column j (band-plane order), sample =
///     1000 + 1000 * U, rounded to binary32. The observed image starts as a
///     copy of this rounded reference.
///  2. Change set: k = round(change_fraction * H * W) pixels, halves rounded
///     away from zero, picked by a partial Fisher-Yates shuffle of the
///     row-major indices [0, HW): for s = 0..k-1, swap index s with index
///     s + below(HW - s). The first k indices change.
///  3. Change offsets: for each changed pixel in row-major order, draw
///     flip = (U < 0.5), then per band b a magnitude 600 + 400 * U. The offset
///     sign alternates across bands (+, -, +, ...), inverted when flip is set.
///  4. Cloud set: a second, independent partial shuffle with
///     k = round(cloud_fraction * H * W).
///  5. Cloud radiance: for each cloud pixel in row-major order and each band,
///     the observed sample is replaced by 3600 + 400 * U.
///  6. Noise: for every observed sample in band-plane order, add
///     noise_std * N, drawn even when noise_std is 0.
///
/// U = (x >> 11) * 2^-53 for the next 64-bit output x, so U lies in [0, 1).
/// below(n) = min(n - 1, floor(U * n)).
/// N = sqrt(-2 ln(1 - U1)) * cos(2 pi U2), one Box-Muller draw per two uniforms.
/// Observed samples are rounded to binary32 after the noise step, so files
/// and memory agree.
struct SyntheticSpec {
  std::size_t height = 128;
  std::size_t width = 128;
  std::size_t bands = 4;
  double change_fraction = 0.1;
  double cloud_fraction = 0.05;
  double noise_std = 10.0;
  std::uint64_t seed = 42;

  void validate() const;
};

struct SyntheticScene {
  BandStack reference;
  BandStack observed;
  BinaryMap truth_change;
  BinaryMap truth_cloud;
};

/// R, G, B, Nir, then B5, B6, ... truncated to `bands`.
std::vector<std::string> default_band_labels(std::size_t bands);

SyntheticScene generate_synthetic(const SyntheticSpec& spec);

/// The random source described on SyntheticSpec.
class SceneRng {
 public:
  explicit SceneRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal();
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cdlink
