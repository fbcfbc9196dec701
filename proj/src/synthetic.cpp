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
#include "cdlink/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cdlink/error.hpp"

namespace cdlink {

namespace {

constexpr double kLandBase = 1000.0;
constexpr double kLandSpread = 1000.0;
constexpr double kChangeBase = 600.0;
constexpr double kChangeSpread = 400.0;
constexpr double kCloudBase = 3600.0;
constexpr double kCloudSpread = 400.0;

double f32(double v) { return static_cast<double>(static_cast<float>(v)); }

std::vector<std::uint8_t> pick_subset(SceneRng& rng, std::size_t n, double fraction) {
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t s = 0; s < k; ++s) std::swap(order[s], order[s + rng.below(n - s)]);
  std::vector<std::uint8_t> mask(n, 0);
  for (std::size_t s = 0; s < k; ++s) mask[order[s]] = 1;
  return mask;
}

}  // namespace

double SceneRng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t SceneRng::below(std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

void SyntheticSpec::validate() const {
  if (height == 0 || width == 0 || bands == 0) throw ConfigError("synthetic scene needs positive height, width and bands");
  if (!(change_fraction >= 0.0 && change_fraction <= 1.0)) throw ConfigError("change_fraction must lie in [0, 1]");
  if (!(cloud_fraction >= 0.0 && cloud_fraction <= 1.0)) throw ConfigError("cloud_fraction must lie in [0, 1]");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw ConfigError("noise_std must be finite and non-negative");
}

std::vector<std::string> default_band_labels(std::size_t bands) {
  std::vector<std::string> labels = {"R", "G", "B", "Nir"};
  for (std::size_t b = 5; b <= bands; ++b) labels.push_back("B" + std::to_string(b));
  labels.resize(bands);
  return labels;
}

SyntheticScene generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  SceneRng rng(spec.seed);
  const Shape shape{spec.height, spec.width};
  const std::size_t n = shape.pixels();
  const std::size_t d = spec.bands;

  std::vector<double> ref(n * d);
  for (double& v : ref) v = f32(kLandBase + kLandSpread * rng.uniform());

  const auto changed = pick_subset(rng, n, spec.change_fraction);
  std::vector<double> obs = ref;
  for (std::size_t i = 0; i < n; ++i) {
    if (!changed[i]) continue;
    const bool flip = rng.uniform() < 0.5;
    for (std::size_t b = 0; b < d; ++b) {
      const double magnitude = kChangeBase + kChangeSpread * rng.uniform();
      const bool positive = (b % 2 == 0) != flip;
      obs[b * n + i] += positive ? magnitude : -magnitude;
    }
  }

  const auto clouds = pick_subset(rng, n, spec.cloud_fraction);
  for (std::size_t i = 0; i < n; ++i) {
    if (!clouds[i]) continue;
    for (std::size_t b = 0; b < d; ++b) obs[b * n + i] = kCloudBase + kCloudSpread * rng.uniform();
  }

  for (double& v : obs) v = f32(v + spec.noise_std * rng.normal());

  const auto labels = default_band_labels(d);
  return SyntheticScene{BandStack(shape, labels, std::move(ref)), BandStack(shape, labels, std::move(obs)),
                        BinaryMap(shape, changed), BinaryMap(shape, clouds)};
}

}  // namespace cdlink
