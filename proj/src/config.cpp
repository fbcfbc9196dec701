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
#include "cdlink/config.hpp"

#include <initializer_list>
#include <set>

#include "cdlink/error.hpp"
#include "cdlink/io.hpp"

namespace cdlink {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& obj, const char* key, T& target) {
  if (obj.contains(key) && !obj.at(key).is_null()) target = obj.at(key).get<T>();
}

template <class T>
void read(const json& obj, const char* key, std::optional<T>& target) {
  if (obj.contains(key) && !obj.at(key).is_null()) target = obj.at(key).get<T>();
}

void read_path(const json& obj, const char* key, std::optional<fs::path>& target, const fs::path& base) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  fs::path p = obj.at(key).get<std::string>();
  target = p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

std::string to_string(CalibrationSplit split) { return split == CalibrationSplit::checkerboard ? "checkerboard" : "all"; }

void PipelineConfig::validate() const {
  if (reference.has_value() != observed.has_value()) {
    throw ConfigError("reference and observed must be given together");
  }
  if (!reference) synthetic.validate();
  for (const auto* p : {&reference, &observed, &truth_change, &cloud_probability, &modcod}) {
    if (*p && !fs::exists(raster_paths(**p).header) && !fs::exists(**p)) {
      throw ConfigError("input file " + (*p)->string() + " does not exist");
    }
  }
  if (scorer.external_path && !fs::exists(raster_paths(*scorer.external_path).header)) {
    throw ConfigError("score map " + scorer.external_path->string() + " does not exist");
  }
  if (cloud_bands.empty() || change_bands.empty()) throw ConfigError("band lists must not be empty");
  cloud.validate();
  if (tile_size == 0) throw ConfigError("tile_size must be positive");
  scorer.validate();
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in [0, 1)");
  if (tau && !(*tau >= 0.0 && *tau <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
  if (bits_per_sample && *bits_per_sample < 1) throw ConfigError("bits_per_sample must be at least 1");
  pass.validate();
  link.validate();
  if (!(transmit_time_s >= 0.0 && transmit_time_s <= pass.pass_duration_s)) {
    throw ConfigError("transmit_time_s must lie within the pass");
  }
  energy.validate();
  if (psnr_max_value && !(*psnr_max_value > 0.0)) throw ConfigError("psnr_max_value must be positive");
  if (histogram_bins < 1) throw ConfigError("histogram_bins must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

PipelineConfig parse_pipeline_config(const json& doc, const fs::path& base) {
  PipelineConfig c;
  try {
    reject_unknown(doc,
                   {"reference", "observed", "truth_change", "cloud_probability", "synthetic", "bands", "cloud", "scorer",
                    "epsilon", "tau", "calibration_split", "volume", "pass", "link", "modcod", "transmit_time_s", "energy",
                    "metrics", "threads", "out"},
                   "config");
    read_path(doc, "reference", c.reference, base);
    read_path(doc, "observed", c.observed, base);
    read_path(doc, "truth_change", c.truth_change, base);
    read_path(doc, "cloud_probability", c.cloud_probability, base);
    read_path(doc, "modcod", c.modcod, base);

    if (doc.contains("synthetic")) {
      const auto& s = doc.at("synthetic");
      reject_unknown(s, {"height", "width", "bands", "change_fraction", "cloud_fraction", "noise_std", "seed"}, "synthetic");
      read(s, "height", c.synthetic.height);
      read(s, "width", c.synthetic.width);
      read(s, "bands", c.synthetic.bands);
      read(s, "change_fraction", c.synthetic.change_fraction);
      read(s, "cloud_fraction", c.synthetic.cloud_fraction);
      read(s, "noise_std", c.synthetic.noise_std);
      read(s, "seed", c.synthetic.seed);
    }
    if (doc.contains("bands")) {
      const auto& b = doc.at("bands");
      reject_unknown(b, {"cloud", "change"}, "bands");
      read(b, "cloud", c.cloud_bands);
      read(b, "change", c.change_bands);
    }
    if (doc.contains("cloud")) {
      const auto& cl = doc.at("cloud");
      reject_unknown(cl, {"gamma", "brightness_low", "brightness_high", "mask_reference", "tile_size"}, "cloud");
      read(cl, "gamma", c.cloud.gamma);
      read(cl, "brightness_low", c.cloud.brightness_low);
      read(cl, "brightness_high", c.cloud.brightness_high);
      read(cl, "mask_reference", c.mask_reference);
      read(cl, "tile_size", c.tile_size);
    }
    if (doc.contains("scorer")) {
      const auto& s = doc.at("scorer");
      reject_unknown(s, {"kind", "external_path", "masked_pixel_score"}, "scorer");
      if (s.contains("kind")) c.scorer.kind = parse_scorer_kind(s.at("kind").get<std::string>());
      read_path(s, "external_path", c.scorer.external_path, base);
      read(s, "masked_pixel_score", c.scorer.masked_pixel_score);
    }
    read(doc, "epsilon", c.epsilon);
    read(doc, "tau", c.tau);
    if (doc.contains("calibration_split")) {
      const auto split = doc.at("calibration_split").get<std::string>();
      if (split == "checkerboard") c.calibration_split = CalibrationSplit::checkerboard;
      else if (split == "all") c.calibration_split = CalibrationSplit::all;
      else throw ConfigError("unknown calibration_split '" + split + "'");
    }
    if (doc.contains("volume")) {
      const auto& v = doc.at("volume");
      reject_unknown(v, {"bits_per_sample", "coordinate_overhead"}, "volume");
      read(v, "bits_per_sample", c.bits_per_sample);
      if (v.contains("coordinate_overhead")) {
        c.coordinate_overhead = parse_coordinate_overhead(v.at("coordinate_overhead").get<std::string>());
      }
    }
    if (doc.contains("pass")) {
      const auto& p = doc.at("pass");
      reject_unknown(p, {"altitude_m", "orbital_period_s", "pass_duration_s", "earth_radius_m"}, "pass");
      read(p, "altitude_m", c.pass.altitude_m);
      read(p, "orbital_period_s", c.pass.orbital_period_s);
      read(p, "pass_duration_s", c.pass.pass_duration_s);
      read(p, "earth_radius_m", c.pass.earth_radius_m);
    }
    if (doc.contains("link")) {
      const auto& l = doc.at("link");
      reject_unknown(l, {"p_tx_w", "g_tx_db", "g_rx_db", "f_c_hz", "noise_power_db", "bandwidth_hz"}, "link");
      read(l, "p_tx_w", c.link.p_tx_w);
      read(l, "g_tx_db", c.link.g_tx_db);
      read(l, "g_rx_db", c.link.g_rx_db);
      read(l, "f_c_hz", c.link.f_c_hz);
      read(l, "noise_power_db", c.link.noise_power_db);
      read(l, "bandwidth_hz", c.link.bandwidth_hz);
    }
    read(doc, "transmit_time_s", c.transmit_time_s);
    if (doc.contains("energy")) {
      const auto& e = doc.at("energy");
      reject_unknown(e, {"f_cpu_hz", "p_proc_w", "kappa", "rho", "n_cpu", "compress_before_transmit"}, "energy");
      read(e, "f_cpu_hz", c.energy.f_cpu_hz);
      read(e, "p_proc_w", c.energy.p_proc_w);
      read(e, "kappa", c.energy.kappa);
      read(e, "rho", c.energy.rho);
      read(e, "n_cpu", c.energy.n_cpu);
      read(e, "compress_before_transmit", c.energy.compress_before_transmit);
    }
    if (doc.contains("metrics")) {
      const auto& m = doc.at("metrics");
      reject_unknown(m, {"psnr_max_value", "histogram_bins"}, "metrics");
      read(m, "psnr_max_value", c.psnr_max_value);
      read(m, "histogram_bins", c.histogram_bins);
    }
    read(doc, "threads", c.threads);
    if (doc.contains("out")) {
      fs::path out = doc.at("out").get<std::string>();
      c.out = out.is_relative() && !base.empty() ? base / out : out;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_pipeline_config(doc, path.parent_path());
}

}  // namespace cdlink
