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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdlink {

struct Shape {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t pixels() const noexcept { return height * width; }
  bool operator==(const Shape&) const = default;
};

std::string to_string(const Shape& shape);

/// H x W x bands raster stored band-plane after band-plane, each plane row-major.
/// Samples are always finite and `band_labels` names every plane.
class BandStack {
 public:
  static constexpr int kDefaultBitDepth = 12;

  BandStack(Shape shape, std::vector<std::string> band_labels, std::vector<double> samples,
            int bit_depth = kDefaultBitDepth);

  static BandStack zeros(Shape shape, std::vector<std::string> band_labels, int bit_depth = kDefaultBitDepth);

  Shape shape() const noexcept { return shape_; }
  std::size_t height() const noexcept { return shape_.height; }
  std::size_t width() const noexcept { return shape_.width; }
  std::size_t bands() const noexcept { return labels_.size(); }
  int bit_depth() const noexcept { return bit_depth_; }
  const std::vector<std::string>& band_labels() const noexcept { return labels_; }

  std::span<const double> samples() const noexcept { return samples_; }
  std::span<const double> plane(std::size_t band) const;

  double at(std::size_t row, std::size_t col, std::size_t band) const;
  void set(std::size_t row, std::size_t col, std::size_t band, double value);

  std::vector<double> pixel(std::size_t row, std::size_t col) const;
  void set_pixel(std::size_t row, std::size_t col, std::span<const double> values);

  std::optional<std::size_t> band_index(std::string_view label) const;

  bool operator==(const BandStack&) const = default;

 private:
  std::size_t offset(std::size_t row, std::size_t col, std::size_t band) const;

  Shape shape_;
  std::vector<std::string> labels_;
  std::vector<double> samples_;
  int bit_depth_;
};

/// H x W raster of {0, 1}. Used for change maps, predictions, selections and cloud masks.
class BinaryMap {
 public:
  BinaryMap(Shape shape, std::vector<std::uint8_t> values);

  static BinaryMap zeros(Shape shape);
  static BinaryMap ones(Shape shape);

  Shape shape() const noexcept { return shape_; }
  std::span<const std::uint8_t> values() const noexcept { return values_; }

  bool at(std::size_t row, std::size_t col) const;
  void set(std::size_t row, std::size_t col, bool value);
  bool at_index(std::size_t index) const { return values_.at(index) != 0; }
  void set_index(std::size_t index, bool value) { values_.at(index) = value ? 1 : 0; }

  std::size_t count() const noexcept;

  bool operator==(const BinaryMap&) const = default;

 private:
  Shape shape_;
  std::vector<std::uint8_t> values_;
};

/// H x W map of probabilities in [0, 1]. Negative zero is stored as +0.
class ScoreMap {
 public:
  ScoreMap(Shape shape, std::vector<double> values);

  static ScoreMap filled(Shape shape, double value);

  Shape shape() const noexcept { return shape_; }
  std::span<const double> values() const noexcept { return values_; }
  double at(std::size_t row, std::size_t col) const;
  double at_index(std::size_t index) const { return values_.at(index); }

  bool operator==(const ScoreMap&) const = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

struct Tile {
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  BandStack stack;
};

/// One downlinked multi-spectral pixel: its coordinates and full spectral vector.
struct TransmittedPixel {
  std::size_t row = 0;
  std::size_t col = 0;
  std::vector<double> values;
};

/// Copies the requested bands, in the requested order.
BandStack select_bands(const BandStack& stack, std::span<const std::string> labels);

/// Per-band z-score: (x - mean) / population standard deviation.
/// Throws DataError if any band is constant.
BandStack zscore_normalize(const BandStack& stack, std::size_t threads = 1);

/// Non-overlapping tiles in row-major order of their origin. Tiles on the
/// bottom/right edges are truncated, never padded.
std::vector<Tile> tile(const BandStack& stack, std::size_t tile_height, std::size_t tile_width);

/// Inverse of tile(): reassembles tiles onto a full-size canvas.
BandStack stitch(std::span<const Tile> tiles, Shape shape);

/// Reference image with every transmitted pixel's spectral vector written in place.
BandStack reconstruct(const BandStack& reference, std::span<const TransmittedPixel> transmitted);

}  // namespace cdlink
