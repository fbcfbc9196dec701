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
#include "cdlink/raster.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cdlink/error.hpp"
#include "cdlink/parallel.hpp"

namespace cdlink {

std::string to_string(const Shape& shape) {
  return std::to_string(shape.height) + "x" + std::to_string(shape.width);
}

// ---------------------------------------------------------------------------
// BandStack

BandStack::BandStack(Shape shape, std::vector<std::string> band_labels, std::vector<double> samples, int bit_depth)
    : shape_(shape), labels_(std::move(band_labels)), samples_(std::move(samples)), bit_depth_(bit_depth) {
  if (shape_.height == 0 || shape_.width == 0) throw DataError("band stack must have positive height and width");
  if (labels_.empty()) throw DataError("band stack must have at least one band");
  if (bit_depth_ < 1) throw DataError("bit depth must be positive");
  if (samples_.size() != shape_.pixels() * labels_.size()) {
    throw DataError("band stack holds " + std::to_string(samples_.size()) + " samples, expected " +
                    std::to_string(shape_.pixels() * labels_.size()));
  }
  if (!std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); })) {
    throw DataError("band stack contains non-finite samples");
  }
}

BandStack BandStack::zeros(Shape shape, std::vector<std::string> band_labels, int bit_depth) {
  const std::size_t n = shape.pixels() * band_labels.size();
  return BandStack(shape, std::move(band_labels), std::vector<double>(n, 0.0), bit_depth);
}

std::size_t BandStack::offset(std::size_t row, std::size_t col, std::size_t band) const {
  if (row >= shape_.height || col >= shape_.width || band >= labels_.size()) {
    throw DataError("band stack index out of range");
  }
  return band * shape_.pixels() + row * shape_.width + col;
}

std::span<const double> BandStack::plane(std::size_t band) const {
  if (band >= labels_.size()) throw DataError("band index out of range");
  return std::span<const double>(samples_).subspan(band * shape_.pixels(), shape_.pixels());
}

double BandStack::at(std::size_t row, std::size_t col, std::size_t band) const {
  return samples_[offset(row, col, band)];
}

void BandStack::set(std::size_t row, std::size_t col, std::size_t band, double value) {
  if (!std::isfinite(value)) throw DataError("non-finite sample");
  samples_[offset(row, col, band)] = value;
}

std::vector<double> BandStack::pixel(std::size_t row, std::size_t col) const {
  std::vector<double> out(bands());
  for (std::size_t b = 0; b < bands(); ++b) out[b] = at(row, col, b);
  return out;
}

void BandStack::set_pixel(std::size_t row, std::size_t col, std::span<const double> values) {
  if (values.size() != bands()) {
    throw DataError("pixel vector has " + std::to_string(values.size()) + " values, expected " +
                    std::to_string(bands()));
  }
  for (std::size_t b = 0; b < bands(); ++b) set(row, col, b, values[b]);
}

std::optional<std::size_t> BandStack::band_index(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

// ---------------------------------------------------------------------------
// BinaryMap / ScoreMap

BinaryMap::BinaryMap(Shape shape, std::vector<std::uint8_t> values) : shape_(shape), values_(std::move(values)) {
  if (shape_.height == 0 || shape_.width == 0) throw DataError("binary map must have positive height and width");
  if (values_.size() != shape_.pixels()) throw DataError("binary map size does not match its shape");
  if (!std::all_of(values_.begin(), values_.end(), [](std::uint8_t v) { return v <= 1; })) {
    throw DataError("binary map values must be 0 or 1");
  }
}

BinaryMap BinaryMap::zeros(Shape shape) { return BinaryMap(shape, std::vector<std::uint8_t>(shape.pixels(), 0)); }

BinaryMap BinaryMap::ones(Shape shape) { return BinaryMap(shape, std::vector<std::uint8_t>(shape.pixels(), 1)); }

bool BinaryMap::at(std::size_t row, std::size_t col) const {
  if (row >= shape_.height || col >= shape_.width) throw DataError("binary map index out of range");
  return values_[row * shape_.width + col] != 0;
}

void BinaryMap::set(std::size_t row, std::size_t col, bool value) {
  if (row >= shape_.height || col >= shape_.width) throw DataError("binary map index out of range");
  values_[row * shape_.width + col] = value ? 1 : 0;
}

std::size_t BinaryMap::count() const noexcept {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), std::uint8_t{1}));
}

ScoreMap::ScoreMap(Shape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
  if (shape_.height == 0 || shape_.width == 0) throw DataError("score map must have positive height and width");
  if (values_.size() != shape_.pixels()) throw DataError("score map size does not match its shape");
  for (double& v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw DataError("score map value " + std::to_string(v) + " outside [0, 1]");
    if (v == 0.0) v = 0.0;  // -0.0 -> +0.0
  }
}

ScoreMap ScoreMap::filled(Shape shape, double value) { return ScoreMap(shape, std::vector<double>(shape.pixels(), value)); }

double ScoreMap::at(std::size_t row, std::size_t col) const {
  if (row >= shape_.height || col >= shape_.width) throw DataError("score map index out of range");
  return values_[row * shape_.width + col];
}

// ---------------------------------------------------------------------------
// Operations

BandStack select_bands(const BandStack& stack, std::span<const std::string> labels) {
  if (labels.empty()) throw ConfigError("no bands requested");
  std::set<std::string> seen;
  std::vector<double> samples;
  samples.reserve(stack.shape().pixels() * labels.size());
  for (const auto& label : labels) {
    if (!seen.insert(label).second) throw ConfigError("band '" + label + "' requested twice");
    const auto index = stack.band_index(label);
    if (!index) throw ConfigError("unknown band '" + label + "'");
    const auto plane = stack.plane(*index);
    samples.insert(samples.end(), plane.begin(), plane.end());
  }
  return BandStack(stack.shape(), {labels.begin(), labels.end()}, std::move(samples), stack.bit_depth());
}

BandStack zscore_normalize(const BandStack& stack, std::size_t threads) {
  const std::size_t n = stack.shape().pixels();
  std::vector<double> out(stack.samples().size());
  std::vector<std::uint8_t> degenerate(stack.bands(), 0);

  // One band per work item; each band's sums run in fixed pixel order.
  detail::parallel_for(stack.bands(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      const auto plane = stack.plane(b);
      double sum = 0.0;
      for (double v : plane) sum += v;
      const double mean = sum / static_cast<double>(n);
      double ss = 0.0;
      for (double v : plane) ss += (v - mean) * (v - mean);
      const double sd = std::sqrt(ss / static_cast<double>(n));
      if (!(sd > 0.0)) {
        degenerate[b] = 1;
        continue;
      }
      double* dst = out.data() + b * n;
      for (std::size_t i = 0; i < n; ++i) dst[i] = (plane[i] - mean) / sd;
    }
  });

  for (std::size_t b = 0; b < stack.bands(); ++b) {
    if (degenerate[b]) throw DataError("band '" + stack.band_labels()[b] + "' is constant; cannot normalize");
  }
  return BandStack(stack.shape(), stack.band_labels(), std::move(out), stack.bit_depth());
}

std::vector<Tile> tile(const BandStack& stack, std::size_t tile_height, std::size_t tile_width) {
  if (tile_height == 0 || tile_width == 0) throw ConfigError("tile size must be positive");
  std::vector<Tile> tiles;
  for (std::size_t r0 = 0; r0 < stack.height(); r0 += tile_height) {
    const std::size_t th = std::min(tile_height, stack.height() - r0);
    for (std::size_t c0 = 0; c0 < stack.width(); c0 += tile_width) {
      const std::size_t tw = std::min(tile_width, stack.width() - c0);
      std::vector<double> samples;
      samples.reserve(th * tw * stack.bands());
      for (std::size_t b = 0; b < stack.bands(); ++b) {
        const auto plane = stack.plane(b);
        for (std::size_t r = 0; r < th; ++r) {
          const auto row = plane.subspan((r0 + r) * stack.width() + c0, tw);
          samples.insert(samples.end(), row.begin(), row.end());
        }
      }
      tiles.push_back(Tile{r0, c0, BandStack({th, tw}, stack.band_labels(), std::move(samples), stack.bit_depth())});
    }
  }
  return tiles;
}

BandStack stitch(std::span<const Tile> tiles, Shape shape) {
  if (tiles.empty()) throw DataError("no tiles to stitch");
  const auto& first = tiles.front().stack;
  const std::size_t bands = first.bands();
  std::vector<double> samples(shape.pixels() * bands, 0.0);
  std::vector<std::uint8_t> covered(shape.pixels(), 0);
  for (const auto& t : tiles) {
    if (t.stack.band_labels() != first.band_labels()) throw DataError("tiles disagree on band labels");
    if (t.row0 + t.stack.height() > shape.height || t.col0 + t.stack.width() > shape.width) {
      throw DataError("tile extends past the stitched canvas");
    }
    for (std::size_t r = 0; r < t.stack.height(); ++r) {
      for (std::size_t c = 0; c < t.stack.width(); ++c) {
        const std::size_t dst = (t.row0 + r) * shape.width + (t.col0 + c);
        if (covered[dst]) throw DataError("tiles overlap");
        covered[dst] = 1;
        for (std::size_t b = 0; b < bands; ++b) samples[b * shape.pixels() + dst] = t.stack.at(r, c, b);
      }
    }
  }
  if (std::find(covered.begin(), covered.end(), std::uint8_t{0}) != covered.end()) {
    throw DataError("tiles do not cover the canvas");
  }
  return BandStack(shape, first.band_labels(), std::move(samples), first.bit_depth());
}

BandStack reconstruct(const BandStack& reference, std::span<const TransmittedPixel> transmitted) {
  BandStack out = reference;
  for (const auto& px : transmitted) {
    if (px.row >= reference.height() || px.col >= reference.width()) {
      throw DataError("transmitted pixel (" + std::to_string(px.row) + ", " + std::to_string(px.col) +
                      ") outside " + to_string(reference.shape()));
    }
    out.set_pixel(px.row, px.col, px.values);
  }
  return out;
}

}  // namespace cdlink
