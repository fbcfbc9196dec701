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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdlink/changescore.hpp"
#include "cdlink/config.hpp"
#include "cdlink/energy.hpp"
#include "cdlink/linksim.hpp"
#include "cdlink/metrics.hpp"

namespace cdlink {

/// Pipeline stages in execution order.
enum class Stage { normalize, cloudmask, score, calibrate, select, link, energy, metrics };

std::string to_string(Stage stage);
Stage parse_stage(const std::string& name);

struct CalibrationSummary {
  std::string source;  // "calibrated" or "override"
  double tau = 0.0;
  double epsilon = 0.0;
  std::optional<CalibrationResult> result;
  std::optional<double> heldout_miss_rate;
  std::size_t heldout_n_changed = 0;
};

struct SelectionSummary {
  std::size_t selected_pixels = 0;
  double selected_fraction = 0.0;
  std::uint64_t volume_bits = 0;
  std::string overhead_mode;
  std::size_t bands_per_pixel = 0;
  std::size_t bits_per_sample = 0;
};

struct RunReport {
  Shape shape;
  std::size_t bands = 0;
  std::string source;  // "synthetic" or "files"
  std::optional<std::uint64_t> seed;
  std::string completed_stage;

  std::size_t cloud_pixels = 0;
  std::optional<CalibrationSummary> calibration;
  std::optional<ConfusionCounts> confusion_all;
  std::optional<ConfusionCounts> confusion_calibration;
  std::optional<double> auc;
  std::optional<SelectionSummary> selection;
  std::optional<LinkBudget> link;
  std::optional<EnergyReport> energy;
  std::optional<double> psnr_db;
  double psnr_max_value = 0.0;

  std::vector<std::string> files;  // artifacts written, relative to the output directory
  std::string generated_at;        // UTC timestamp; the only non-deterministic field
};

/// Runs band selection, normalization, cloud removal, change scoring,
/// threshold segmentation, selection, link budget, energy accounting and the
/// gateway-side reconstruction, writing every intermediate artifact to
/// config.out. Stops after `stop_after` when given. Errors carry a
/// "[stage]" prefix.
RunReport run_pipeline(const PipelineConfig& config, std::optional<Stage> stop_after = std::nullopt);

nlohmann::ordered_json to_json(const RunReport& report);
nlohmann::ordered_json to_json(const EnergyReport& report);
nlohmann::ordered_json to_json(const LinkBudget& link);
nlohmann::ordered_json to_json(const CalibrationResult& result);
nlohmann::ordered_json to_json(const ConfusionCounts& counts);

}  // namespace cdlink
