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
#include "cdlink/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cdlink/error.hpp"

namespace cdlink {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t sample_size(SampleType type) {
  switch (type) {
    case SampleType::u8: return 1;
    case SampleType::u16le: return 2;
    case SampleType::f32le: return 4;
  }
  return 0;
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void put_f32(std::string& out, float f) {
  const auto v = std::bit_cast<std::uint32_t>(f);
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

double get_sample(const std::string& bytes, std::size_t index, SampleType type) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + index * sample_size(type);
  switch (type) {
    case SampleType::u8: return p[0];
    case SampleType::u16le: return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    case SampleType::f32le: {
      const std::uint32_t v = std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
                              (std::uint32_t{p[3]} << 24);
      return static_cast<double>(std::bit_cast<float>(v));
    }
  }
  return 0.0;
}

std::vector<double> read_payload(const RasterHeader& header, const fs::path& payload_path) {
  const std::string bytes = read_file(payload_path);
  const std::size_t count = header.shape.pixels() * header.bands;
  if (bytes.size() != count * sample_size(header.dtype)) {
    throw DataError(payload_path.string() + ": payload holds " + std::to_string(bytes.size()) + " bytes, header implies " +
                    std::to_string(count * sample_size(header.dtype)));
  }
  std::vector<double> samples(count);
  for (std::size_t i = 0; i < count; ++i) {
    samples[i] = get_sample(bytes, i, header.dtype);
    if (!std::isfinite(samples[i])) throw DataError(payload_path.string() + ": non-finite sample at index " + std::to_string(i));
  }
  return samples;
}

std::string encode_samples(std::span<const double> samples, SampleType type) {
  std::string out;
  out.reserve(samples.size() * sample_size(type));
  for (double v : samples) {
    switch (type) {
      case SampleType::u8:
        if (v != 0.0 && v != 1.0) throw DataError("u8 payloads only hold 0/1 masks");
        out.push_back(static_cast<char>(v));
        break;
      case SampleType::u16le:
        if (!(v >= 0.0 && v <= 65535.0) || v != std::floor(v)) {
          throw DataError("sample " + std::to_string(v) + " is not representable as u16");
        }
        put_u16(out, static_cast<std::uint16_t>(v));
        break;
      case SampleType::f32le: put_f32(out, static_cast<float>(v)); break;
    }
  }
  return out;
}

void store_raster(const RasterHeader& header, std::span<const double> samples, const fs::path& path) {
  const auto paths = raster_paths(path);
  json j;
  j["height"] = header.shape.height;
  j["width"] = header.shape.width;
  j["bands"] = header.bands;
  j["dtype"] = to_string(header.dtype);
  j["band_labels"] = header.band_labels;
  j["bit_depth"] = header.bit_depth;
  write_file_atomic(paths.payload, encode_samples(samples, header.dtype));
  write_file_atomic(paths.header, j.dump(2) + "\n");
}

RasterHeader read_single_band(const fs::path& path, SampleType want, std::optional<Shape> expected) {
  const RasterHeader header = read_raster_header(path);
  if (header.bands != 1) throw DataError(path.string() + ": expected a single-band map");
  if (header.dtype != want) {
    throw DataError(path.string() + ": expected dtype " + to_string(want) + ", found " + to_string(header.dtype));
  }
  if (expected && header.shape != *expected) {
    throw DataError(path.string() + ": map is " + to_string(header.shape) + ", expected " + to_string(*expected));
  }
  return header;
}

}  // namespace

std::string to_string(SampleType type) {
  switch (type) {
    case SampleType::u8: return "u8";
    case SampleType::u16le: return "u16le";
    case SampleType::f32le: return "f32le";
  }
  return "?";
}

SampleType parse_sample_type(std::string_view name) {
  if (name == "u8") return SampleType::u8;
  if (name == "u16le") return SampleType::u16le;
  if (name == "f32le") return SampleType::f32le;
  throw DataError("unsupported dtype '" + std::string(name) + "'");
}

RasterPaths raster_paths(const fs::path& path) {
  fs::path stem = path;
  if (path.extension() == ".json" || path.extension() == ".bin") stem.replace_extension();
  return {fs::path(stem).concat(".json"), fs::path(stem).concat(".bin")};
}

RasterHeader read_raster_header(const fs::path& path) {
  const auto paths = raster_paths(path);
  json j;
  try {
    j = json::parse(read_file(paths.header));
  } catch (const json::parse_error& e) {
    throw DataError(paths.header.string() + ": " + e.what());
  }
  try {
    RasterHeader h;
    h.shape = {j.at("height").get<std::size_t>(), j.at("width").get<std::size_t>()};
    h.bands = j.at("bands").get<std::size_t>();
    h.dtype = parse_sample_type(j.at("dtype").get<std::string>());
    if (j.contains("band_labels")) {
      h.band_labels = j.at("band_labels").get<std::vector<std::string>>();
    } else {
      for (std::size_t b = 0; b < h.bands; ++b) h.band_labels.push_back("B" + std::to_string(b + 1));
    }
    h.bit_depth = j.value("bit_depth", BandStack::kDefaultBitDepth);
    if (h.band_labels.size() != h.bands) throw DataError(paths.header.string() + ": band_labels length differs from bands");
    return h;
  } catch (const json::exception& e) {
    throw DataError(paths.header.string() + ": " + e.what());
  }
}

BandStack load_band_stack(const fs::path& path) {
  const RasterHeader header = read_raster_header(path);
  if (header.dtype == SampleType::u8) throw DataError(path.string() + ": band stacks must be u16le or f32le");
  return BandStack(header.shape, header.band_labels, read_payload(header, raster_paths(path).payload), header.bit_depth);
}

void store_band_stack(const BandStack& stack, const fs::path& path, SampleType dtype) {
  if (dtype == SampleType::u8) throw DataError("band stacks must be stored as u16le or f32le");
  store_raster({stack.shape(), stack.bands(), dtype, stack.band_labels(), stack.bit_depth()}, stack.samples(), path);
}

ScoreMap load_score_map(const fs::path& path, std::optional<Shape> expected) {
  const RasterHeader header = read_single_band(path, SampleType::f32le, expected);
  try {
    return ScoreMap(header.shape, read_payload(header, raster_paths(path).payload));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void store_score_map(const ScoreMap& map, const fs::path& path) {
  store_raster({map.shape(), 1, SampleType::f32le, {"score"}, 32}, map.values(), path);
}

BinaryMap load_binary_map(const fs::path& path, std::optional<Shape> expected) {
  const RasterHeader header = read_single_band(path, SampleType::u8, expected);
  const auto samples = read_payload(header, raster_paths(path).payload);
  std::vector<std::uint8_t> values(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] > 1.0) throw DataError(path.string() + ": binary map values must be 0 or 1");
    values[i] = static_cast<std::uint8_t>(samples[i]);
  }
  return BinaryMap(header.shape, std::move(values));
}

void store_binary_map(const BinaryMap& map, const fs::path& path) {
  std::vector<double> samples(map.values().begin(), map.values().end());
  store_raster({map.shape(), 1, SampleType::u8, {"mask"}, 1}, samples, path);
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cdlink
