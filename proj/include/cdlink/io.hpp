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
#include <string_view>

#include "cdlink/raster.hpp"

namespace cdlink {

/// On-disk sample encodings. Band stacks use u16le or f32le, score maps f32le,
/// binary maps u8.
enum class SampleType { u8, u16le, f32le };

std::string to_string(SampleType type);
SampleType parse_sample_type(std::string_view name);

/// Parsed `<name>.json` header of a raster file pair.
struct RasterHeader {
  Shape shape;
  std::size_t bands = 0;
  SampleType dtype = SampleType::f32le;
  std::vector<std::string> band_labels;
  int bit_depth = BandStack::kDefaultBitDepth;
};

/// `path` may name the header (`x.json`), the payload (`x.bin`) or the bare stem (`x`).
struct RasterPaths {
  std::filesystem::path header;
  std::filesystem::path payload;
};
RasterPaths raster_paths(const std::filesystem::path& path);

RasterHeader read_raster_header(const std::filesystem::path& path);

BandStack load_band_stack(const std::filesystem::path& path);
void store_band_stack(const BandStack& stack, const std::filesystem::path& path, SampleType dtype = SampleType::f32le);

/// Loads an f32le single-band map and checks every value lies in [0, 1].
/// With `expected`, a shape mismatch is an error too.
ScoreMap load_score_map(const std::filesystem::path& path, std::optional<Shape> expected = std::nullopt);
void store_score_map(const ScoreMap& map, const std::filesystem::path& path);

BinaryMap load_binary_map(const std::filesystem::path& path, std::optional<Shape> expected = std::nullopt);
void store_binary_map(const BinaryMap& map, const std::filesystem::path& path);

/// Writes to a sibling temp file then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace cdlink
