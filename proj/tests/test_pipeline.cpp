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
#include <doctest.h>

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "cdlink/error.hpp"
#include "cdlink/io.hpp"
#include "cdlink/pipeline.hpp"
#include "test_util.hpp"

using namespace cdlink;
using cdlink::test::TempDir;

namespace {

PipelineConfig small_synthetic(const TempDir& dir, std::size_t side = 32) {
  PipelineConfig cfg;
  cfg.synthetic.height = side;
  cfg.synthetic.width = side;
  cfg.tile_size = 16;
  cfg.out = dir / "out";
  return cfg;
}

// External inputs that make the scorer exact: truth as scores, no clouds.
void use_perfect_scorer(PipelineConfig& cfg, const TempDir& dir) {
  const auto scene = generate_synthetic(cfg.synthetic);
  std::vector<double> s(scene.truth_change.values().begin(), scene.truth_change.values().end());
  store_score_map(ScoreMap(scene.truth_change.shape(), s), dir / "perfect");
  store_score_map(ScoreMap::filled(scene.truth_change.shape(), 0.0), dir / "clear");
  cfg.scorer.kind = ScorerKind::external_file;
  cfg.scorer.external_path = dir / "perfect";
  cfg.cloud_probability = dir / "clear";
}

nlohmann::json read_json(const std::filesystem::path& p) { return nlohmann::json::parse(std::ifstream(p)); }

}  // namespace

TEST_CASE("zero-change scene selects nothing and costs nothing") {
  TempDir dir("pipe");
  auto cfg = small_synthetic(dir);
  cfg.synthetic.change_fraction = 0;
  cfg.synthetic.cloud_fraction = 0;
  cfg.synthetic.noise_std = 0;
  cfg.tau = 0.5;
  const auto r = run_pipeline(cfg);
  CHECK(r.completed_stage == "metrics");
  REQUIRE(r.selection);
  CHECK(r.selection->selected_pixels == 0);
  REQUIRE(r.energy);
  CHECK(r.energy->e_total_j == 0.0);
  CHECK(r.energy->savings_fraction == 1.0);
  REQUIRE(r.psnr_db);
  CHECK(std::isinf(*r.psnr_db));
  CHECK_FALSE(r.auc);
  CHECK(read_json(dir / "out/report.json")["psnr"]["db"] == "inf");
}

TEST_CASE("zero-change scene cannot be calibrated without a fixed threshold") {
  TempDir dir("pipe");
  auto cfg = small_synthetic(dir);
  cfg.synthetic.change_fraction = 0;
  CHECK_THROWS_AS(run_pipeline(cfg), DataError);
}

TEST_CASE("a perfect scorer reaches the P1 optimum") {
  TempDir dir("pipe");
  auto cfg = small_synthetic(dir);
  cfg.synthetic.cloud_fraction = 0;
  cfg.epsilon = 0.0;
  use_perfect_scorer(cfg, dir);
  const auto r = run_pipeline(cfg);

  const auto scene = generate_synthetic(cfg.synthetic);
  const auto selection = load_binary_map(dir / "out/selection");
  CHECK(selection == scene.truth_change);
  REQUIRE(r.calibration);
  CHECK(r.calibration->tau == 1.0);
  CHECK(r.calibration->heldout_miss_rate == 0.0);
  REQUIRE(r.auc);
  CHECK(*r.auc == 1.0);

  const VolumeConfig vol{4, 12, CoordinateOverhead::none};
  const auto best = solve_p1_oracle(scene.truth_change, vol);
  REQUIRE(r.energy);
  REQUIRE(r.link);
  const auto expected = total_energy(best, vol, r.link->rate->rate_bps, r.link->rate->modcod.name, cfg.link.p_tx_w, cfg.energy);
  CHECK(r.energy->volume_bits == best.volume_bits);
  CHECK(r.energy->e_total_j == expected.e_total_j);

  // Transmitted pixels come from the observed image, the rest from the reference.
  const auto rec = load_band_stack(dir / "out/reconstruction");
  for (std::size_t b = 0; b < rec.bands(); ++b)
    for (std::size_t i = 0; i < rec.shape().pixels(); ++i)
      CHECK(rec.plane(b)[i] ==
            (scene.truth_change.at_index(i) ? scene.observed.plane(b)[i] : scene.reference.plane(b)[i]));
  REQUIRE(r.psnr_db);
  CHECK(std::isfinite(*r.psnr_db));
}

TEST_CASE("selecting 60 percent of pixels saves 40 percent of the energy") {
  TempDir dir("pipe");
  auto cfg = small_synthetic(dir, 10);
  std::vector<double> s(100, 0.0);
  for (std::size_t i = 0; i < 60; ++i) s[i * 7 % 100] = 1.0;
  store_score_map(ScoreMap({10, 10}, s), dir / "sixty");
  store_score_map(ScoreMap::filled({10, 10}, 0.0), dir / "clear");
  cfg.scorer.kind = ScorerKind::external_file;
  cfg.scorer.external_path = dir / "sixty";
  cfg.cloud_probability = dir / "clear";
  cfg.tau = 0.5;
  const auto r = run_pipeline(cfg);
  REQUIRE(r.selection);
  CHECK(r.selection->selected_pixels == 60);
  REQUIRE(r.energy);
  CHECK(std::abs(r.energy->savings_fraction - 0.4) < 1e-12);
}

TEST_CASE("calibrated threshold meets the miss-rate bound on its split") {
  TempDir dir("pipe");
  auto cfg = small_synthetic(dir, 48);
  for (double eps : {0.0, 0.05, 0.2}) {
    cfg.epsilon = eps;
    const auto r = run_pipeline(cfg, Stage::calibrate);
    CHECK(r.completed_stage == "calibrate");
    REQUIRE(r.calibration);
    REQUIRE(r.calibration->result);
    CHECK(r.calibration->result->achieved_miss_rate <= eps);
    CHECK(r.calibration->heldout_miss_rate.has_value());
  }
}

TEST_CASE("stop_after ends the run after the requested stage") {
  TempDir dir("pipe");
  const auto cfg = small_synthetic(dir);
  const auto r = run_pipeline(cfg, Stage::score);
  CHECK(r.completed_stage == "score");
  CHECK_FALSE(r.calibration);
  CHECK(std::filesystem::exists(dir / "out/change_scores.json"));
  CHECK_FALSE(std::filesystem::exists(dir / "out/selection.json"));
  CHECK(read_json(dir / "out/report.json")["completed_stage"] == "score");
  CHECK(parse_stage("energy") == Stage::energy);
  CHECK_THROWS_AS(parse_stage("compress"), ConfigError);
}

TEST_CASE("link outage aborts after selection with a report") {
  TempDir dir("pipe");
  auto cfg = small_synthetic(dir);
  cfg.link.p_tx_w = 1e-6;
  try {
    run_pipeline(cfg);
    FAIL("expected an outage");
  } catch (const LinkOutage& e) {
    CHECK(exit_code(e.kind()) == 4);
    CHECK(std::string(e.what()).find("[link]") != std::string::npos);
  }
  const auto j = read_json(dir / "out/report.json");
  CHECK(j["completed_stage"] == "select");
  CHECK(std::filesystem::exists(dir / "out/selection.json"));
}

TEST_CASE("runs are reproducible across thread counts") {
  TempDir dir("pipe");
  auto cfg = small_synthetic(dir, 40);
  cfg.tile_size = 7;
  cfg.out = dir / "a";
  cfg.threads = 1;
  run_pipeline(cfg);
  cfg.out = dir / "b";
  cfg.threads = 4;
  run_pipeline(cfg);
  std::size_t compared = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    if (name == "report.json") continue;
    CHECK_MESSAGE(read_file(entry.path()) == read_file(dir / "b" / name), name.string());
    ++compared;
  }
  CHECK(compared > 10);
  auto ja = read_json(dir / "a/report.json");
  auto jb = read_json(dir / "b/report.json");
  ja.erase("generated_at");
  jb.erase("generated_at");
  CHECK(ja == jb);
}

TEST_CASE("file inputs with a mismatched truth map are data errors") {
  TempDir dir("pipe");
  auto cfg = small_synthetic(dir, 8);
  const auto scene = generate_synthetic(cfg.synthetic);
  store_band_stack(scene.reference, dir / "ref", SampleType::f32le);
  store_band_stack(scene.observed, dir / "obs", SampleType::f32le);
  store_binary_map(BinaryMap::zeros({4, 4}), dir / "truth");
  cfg.reference = dir / "ref";
  cfg.observed = dir / "obs";
  cfg.truth_change = dir / "truth";
  try {
    run_pipeline(cfg);
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).rfind("[load]", 0) == 0);
  }
}

TEST_CASE("config parsing") {
  TempDir dir("cfg");
  const auto cfg = parse_pipeline_config(nlohmann::json::parse(R"({
    "reference": "a/ref", "observed": "a/obs", "epsilon": 0.1,
    "volume": {"bits_per_sample": 8, "coordinate_overhead": "bitmap"},
    "link": {"p_tx_w": 20}, "calibration_split": "all", "threads": 3
  })"), dir.path());
  CHECK(cfg.reference == dir / "a/ref");
  CHECK(cfg.epsilon == 0.1);
  CHECK(cfg.bits_per_sample == 8u);
  CHECK(cfg.coordinate_overhead == CoordinateOverhead::bitmap);
  CHECK(cfg.link.p_tx_w == 20.0);
  CHECK(cfg.link.g_rx_db == 34.2);
  CHECK(cfg.calibration_split == CalibrationSplit::all);
  CHECK(cfg.threads == 3);

  CHECK_THROWS_AS(parse_pipeline_config(nlohmann::json::parse(R"({"epsilonn": 0.1})")), ConfigError);
  CHECK_THROWS_AS(parse_pipeline_config(nlohmann::json::parse(R"({"link": {"power": 1}})")), ConfigError);
  CHECK_THROWS_AS(parse_pipeline_config(nlohmann::json::parse(R"({"epsilon": "high"})")), ConfigError);
  CHECK_THROWS_AS(parse_pipeline_config(nlohmann::json::parse(R"({"epsilon": 1.0})")).validate(), ConfigError);
  CHECK_THROWS_AS(parse_pipeline_config(nlohmann::json::parse(R"({"reference": "x"})")).validate(), ConfigError);

  std::ofstream(dir / "c.json") << "{ not json";
  CHECK_THROWS_AS(load_pipeline_config(dir / "c.json"), ConfigError);
  CHECK_THROWS_AS(load_pipeline_config(dir / "missing.json"), ConfigError);
}
