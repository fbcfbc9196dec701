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
#include <vector>

#include <json.hpp>

#include "cdlink/changescore.hpp"
#include "cdlink/cloudmask.hpp"
#include "cdlink/energy.hpp"
#include "cdlink/linksim.hpp"
#include "cdlink/selection.hpp"
#include "cdlink/synthetic.hpp"

namespace cdlink {

/// Which labeled pixels choose tau. `checkerboard` calibrates on pixels with
/// (row + col) even and reports the miss rate on the odd ones as held-out.
enum class CalibrationSplit { checkerboard, all };

std::string to_string(CalibrationSplit split);

/// Everything a pipeline run needs. Defaults reproduce the reference regime
/// (786 km orbit, 20 GHz Ka-band link, epsilon = 0.05, ...), so an empty JSON
/// document is a valid configuration that runs on a synthetic scene.
struct PipelineConfig {
  // Inputs. Without reference/observed a synthetic scene is generated.
  std::optional<std::filesystem::path> reference;
  std::optional<std::filesystem::path> observed;
  std::optional<std::filesystem::path> truth_change;
  std::optional<std::filesystem::path> cloud_probability;
  SyntheticSpec synthetic;

  std::vector<std::string> cloud_bands = {"R", "G", "B", "Nir"};
  std::vector<std::string> change_bands = {"R", "G", "B"};

  CloudConfig cloud;
  bool mask_reference = false;  // also mask clouds detected in the reference
  std::size_t tile_size = 384;

  ScorerConfig scorer;
  double epsilon = 0.05;
  std::optional<double> tau;  // skips calibration when set
  CalibrationSplit calibration_split = CalibrationSplit::checkerboard;

  std::optional<std::size_t> bits_per_sample;  // defaults to the observed stack's bit depth
  CoordinateOverhead coordinate_overhead = CoordinateOverhead::none;

  PassConfig pass;
  LinkConfig link;
  std::optional<std::filesystem::path> modcod;  // bundled DVB-S2 table when absent
  double transmit_time_s = 0.0;                 // 0 = start of pass, the worst case

  EnergyConfig energy;

  std::optional<double> psnr_max_value;  // defaults to 2^bit_depth - 1
  std::size_t histogram_bins = 20;

  std::size_t threads = 1;
  std::filesystem::path out = "out";

  void validate() const;
};

/// Relative paths in the document are resolved against `base_dir`.
/// Unknown keys are rejected.
PipelineConfig parse_pipeline_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace cdlink
