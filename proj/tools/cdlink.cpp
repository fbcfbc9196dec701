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
// cdlink: command-line driver for the change-detection downlink simulator.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 link outage.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdlink/changescore.hpp"
#include "cdlink/cloudmask.hpp"
#include "cdlink/config.hpp"
#include "cdlink/energy.hpp"
#include "cdlink/error.hpp"
#include "cdlink/io.hpp"
#include "cdlink/linksim.hpp"
#include "cdlink/metrics.hpp"
#include "cdlink/pipeline.hpp"
#include "cdlink/selection.hpp"
#include "cdlink/synthetic.hpp"

namespace fs = std::filesystem;
using namespace cdlink;
using nlohmann::ordered_json;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::optional<double> tau;
  std::string modcod;
  std::optional<std::size_t> threads;
};

PipelineConfig resolve(const Common& c) {
  PipelineConfig cfg = c.config.empty() ? PipelineConfig{} : load_pipeline_config(c.config);
  if (!c.out.empty()) cfg.out = c.out;
  if (c.seed) cfg.synthetic.seed = *c.seed;
  if (c.epsilon) cfg.epsilon = *c.epsilon;
  if (c.tau) cfg.tau = *c.tau;
  if (!c.modcod.empty()) cfg.modcod = fs::path(c.modcod);
  if (c.threads) cfg.threads = *c.threads;
  return cfg;
}

void print(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::string> split_labels(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ModcodTable modcod_table(const PipelineConfig& cfg) {
  return cfg.modcod ? ModcodTable::load_csv(*cfg.modcod) : ModcodTable::dvbs2();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"On-board change-detection downlink simulator"};
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config, "JSON configuration document")->check(CLI::ExistingFile);
    cmd->add_option("--out", common.out, "Output directory");
    cmd->add_option("--seed", common.seed, "Seed of the synthetic scene generator");
    cmd->add_option("--epsilon", common.epsilon, "Miss-rate bound for threshold calibration");
    cmd->add_option("--tau", common.tau, "Fixed segmentation threshold (skips calibration)");
    cmd->add_option("--modcod", common.modcod, "MODCOD table CSV")->check(CLI::ExistingFile);
    cmd->add_option("--threads", common.threads, "Worker threads");
  };

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run the full change-detection downlink pipeline");
  add_common(pipeline);
  std::string stage;
  pipeline->add_option("--stage", stage, "Stop after this stage");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic image pair with ground truth");
  add_common(synth);
  std::optional<std::size_t> s_height, s_width, s_bands;
  std::optional<double> s_change, s_cloud, s_noise;
  synth->add_option("--height", s_height);
  synth->add_option("--width", s_width);
  synth->add_option("--bands", s_bands);
  synth->add_option("--change-fraction", s_change);
  synth->add_option("--cloud-fraction", s_cloud);
  synth->add_option("--noise-std", s_noise);

  // normalize
  auto* normalize = app.add_subcommand("normalize", "Select bands and z-score normalize a band stack");
  std::string n_input, n_output, n_bands;
  normalize->add_option("--input", n_input)->required();
  normalize->add_option("--output", n_output)->required();
  normalize->add_option("--bands", n_bands, "Comma-separated band labels to keep");

  // cloudmask
  auto* cloudmask = app.add_subcommand("cloudmask", "Cloud probability and binary mask from a normalized RGBNir stack");
  add_common(cloudmask);
  std::string c_input, c_probability;
  std::optional<double> c_gamma;
  cloudmask->add_option("--input", c_input, "Normalized R,G,B,Nir stack");
  cloudmask->add_option("--probability", c_probability, "External cloud probability map (skips detection)");
  cloudmask->add_option("--gamma", c_gamma, "Binarization threshold");

  // score
  auto* score = app.add_subcommand("score", "Baseline change scores of a normalized image pair");
  add_common(score);
  std::string sc_ref, sc_obs, sc_mask, sc_output;
  score->add_option("--reference", sc_ref)->required();
  score->add_option("--observed", sc_obs)->required();
  score->add_option("--cloud-mask", sc_mask);
  score->add_option("--output", sc_output)->required();

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Largest threshold meeting the miss-rate bound");
  add_common(calibrate);
  std::string ca_scores, ca_truth;
  calibrate->add_option("--scores", ca_scores)->required();
  calibrate->add_option("--truth", ca_truth)->required();

  // select
  auto* select = app.add_subcommand("select", "Segment scores into a transmission selection");
  add_common(select);
  std::string se_scores, se_prediction, se_overhead;
  std::optional<std::size_t> se_bands, se_bits;
  select->add_option("--scores", se_scores, "Score map (segmented at --tau)");
  select->add_option("--prediction", se_prediction, "Binary prediction used as-is");
  select->add_option("--bands-per-pixel", se_bands)->required();
  select->add_option("--bits-per-sample", se_bits);
  select->add_option("--overhead", se_overhead, "none | coord_list | bitmap");

  // link
  auto* link = app.add_subcommand("link", "Slant range, SNR and MODCOD at one instant of the pass");
  add_common(link);
  std::optional<double> l_time;
  link->add_option("--time", l_time, "Seconds from start of pass");

  // energy
  auto* energy = app.add_subcommand("energy", "Processing and transmission energy of a data volume");
  add_common(energy);
  std::string e_selection;
  std::optional<double> e_rate;
  std::optional<std::size_t> e_bands, e_bits;
  energy->add_option("--selection", e_selection, "Selection map")->required();
  energy->add_option("--bands-per-pixel", e_bands)->required();
  energy->add_option("--bits-per-sample", e_bits);
  energy->add_option("--rate", e_rate, "Rate in bit/s (default: from the link budget)");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "ROC/AUC, download curve, histograms and PSNR");
  add_common(metrics);
  std::string m_scores, m_truth, m_prediction, m_recon, m_observed;
  std::optional<double> m_max;
  metrics->add_option("--scores", m_scores)->required();
  metrics->add_option("--truth", m_truth);
  metrics->add_option("--prediction", m_prediction);
  metrics->add_option("--reconstruction", m_recon);
  metrics->add_option("--observed", m_observed);
  metrics->add_option("--psnr-max", m_max);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorKind::config);
  }

  try {
    if (pipeline->parsed()) {
      const auto cfg = resolve(common);
      const auto report = run_pipeline(cfg, stage.empty() ? std::nullopt : std::optional(parse_stage(stage)));
      print(to_json(report));
    } else if (synth->parsed()) {
      auto cfg = resolve(common);
      auto& spec = cfg.synthetic;
      if (s_height) spec.height = *s_height;
      if (s_width) spec.width = *s_width;
      if (s_bands) spec.bands = *s_bands;
      if (s_change) spec.change_fraction = *s_change;
      if (s_cloud) spec.cloud_fraction = *s_cloud;
      if (s_noise) spec.noise_std = *s_noise;
      const auto scene = generate_synthetic(spec);
      store_band_stack(scene.reference, cfg.out / "reference");
      store_band_stack(scene.observed, cfg.out / "observed");
      store_binary_map(scene.truth_change, cfg.out / "truth_change");
      store_binary_map(scene.truth_cloud, cfg.out / "truth_cloud");
      print({{"out", cfg.out.string()},
             {"changed_pixels", scene.truth_change.count()},
             {"cloud_pixels", scene.truth_cloud.count()},
             {"seed", spec.seed}});
    } else if (normalize->parsed()) {
      auto stack = load_band_stack(n_input);
      if (!n_bands.empty()) {
        const auto labels = split_labels(n_bands);
        stack = select_bands(stack, labels);
      }
      store_band_stack(zscore_normalize(stack), n_output);
    } else if (cloudmask->parsed()) {
      auto cfg = resolve(common);
      if (c_gamma) cfg.cloud.gamma = *c_gamma;
      if (c_input.empty() == c_probability.empty()) throw ConfigError("give exactly one of --input or --probability");
      const ScoreMap prob = c_probability.empty() ? detect_clouds_baseline(load_band_stack(c_input), cfg.cloud, cfg.threads)
                                                  : load_cloud_probability(c_probability);
      const BinaryMap mask = binarize(prob, cfg.cloud.gamma);
      store_score_map(prob, cfg.out / "cloud_probability");
      store_binary_map(mask, cfg.out / "cloud_mask");
      print({{"cloud_pixels", mask.count()}, {"gamma", cfg.cloud.gamma}});
    } else if (score->parsed()) {
      const auto cfg = resolve(common);
      const auto ref = load_band_stack(sc_ref);
      const auto obs = load_band_stack(sc_obs);
      const BinaryMap mask = sc_mask.empty() ? BinaryMap::zeros(obs.shape()) : load_binary_map(sc_mask, obs.shape());
      store_score_map(score_changes_baseline(ref, apply_mask(obs, mask), mask, cfg.scorer.masked_pixel_score, cfg.threads),
                      sc_output);
    } else if (calibrate->parsed()) {
      const auto cfg = resolve(common);
      const auto scores = load_score_map(ca_scores);
      const auto truth = load_binary_map(ca_truth, scores.shape());
      const auto result = calibrate_threshold(scores, truth, cfg.epsilon);
      ordered_json j = to_json(result);
      j["epsilon"] = cfg.epsilon;
      if (!common.out.empty()) write_file_atomic(cfg.out / "calibration.json", j.dump(2) + "\n");
      print(j);
    } else if (select->parsed()) {
      const auto cfg = resolve(common);
      if (se_scores.empty() == se_prediction.empty()) throw ConfigError("give exactly one of --scores or --prediction");
      BinaryMap prediction = BinaryMap::zeros({1, 1});
      if (!se_prediction.empty()) {
        prediction = load_binary_map(se_prediction);
      } else {
        if (!cfg.tau) throw ConfigError("--scores needs --tau");
        prediction = segment(load_score_map(se_scores), *cfg.tau);
      }
      const VolumeConfig volume{*se_bands, se_bits.value_or(BandStack::kDefaultBitDepth),
                                se_overhead.empty() ? cfg.coordinate_overhead : parse_coordinate_overhead(se_overhead)};
      const auto sel = build_selection(prediction, volume);
      const ordered_json meta{{"volume_bits", sel.volume_bits},
                              {"overhead_mode", to_string(volume.coordinate_overhead)},
                              {"D", volume.bands_per_pixel},
                              {"b", volume.bits_per_sample}};
      store_binary_map(sel.alpha, cfg.out / "selection");
      write_file_atomic(cfg.out / "selection.meta.json", meta.dump(2) + "\n");
      print(meta);
    } else if (link->parsed()) {
      const auto cfg = resolve(common);
      const auto lb = evaluate_link(cfg.pass, cfg.link, modcod_table(cfg), l_time.value_or(cfg.transmit_time_s));
      print(to_json(lb));
      if (!lb.rate) throw LinkOutage("SNR " + std::to_string(lb.snr.db) + " dB is below every MODCOD threshold");
    } else if (energy->parsed()) {
      const auto cfg = resolve(common);
      const auto alpha = load_binary_map(e_selection);
      const VolumeConfig volume{*e_bands, e_bits.value_or(BandStack::kDefaultBitDepth), cfg.coordinate_overhead};
      double rate = 0.0;
      std::string name = "manual";
      if (e_rate) {
        rate = *e_rate;
      } else {
        const auto lb = evaluate_link(cfg.pass, cfg.link, modcod_table(cfg), cfg.transmit_time_s);
        if (!lb.rate) throw LinkOutage("SNR " + std::to_string(lb.snr.db) + " dB is below every MODCOD threshold");
        rate = lb.rate->rate_bps;
        name = lb.rate->modcod.name;
      }
      print(to_json(total_energy(build_selection(alpha, volume), volume, rate, name, cfg.link.p_tx_w, cfg.energy)));
    } else if (metrics->parsed()) {
      const auto cfg = resolve(common);
      const auto scores = load_score_map(m_scores);
      ordered_json j;
      write_file_atomic(cfg.out / "cumulative_download.csv", download_csv(cumulative_download_curve(scores)));
      if (!m_truth.empty()) {
        const auto truth = load_binary_map(m_truth, scores.shape());
        const auto roc = roc_auc(scores, truth);
        j["auc"] = roc.auc;
        write_file_atomic(cfg.out / "roc.csv", roc_csv(roc));
        write_file_atomic(cfg.out / "score_histograms.csv",
                          histograms_csv(score_histograms(scores, truth, cfg.histogram_bins)));
        if (!m_prediction.empty()) j["confusion"] = to_json(confusion(load_binary_map(m_prediction, scores.shape()), truth));
      }
      if (!m_recon.empty() != !m_observed.empty()) throw ConfigError("PSNR needs both --reconstruction and --observed");
      if (!m_recon.empty()) {
        const auto recon = load_band_stack(m_recon);
        const auto obs = load_band_stack(m_observed);
        const double max_value = m_max.value_or(std::ldexp(1.0, obs.bit_depth()) - 1.0);
        const double db = psnr(recon, obs, max_value);
        j["psnr_db"] = std::isinf(db) ? ordered_json("inf") : ordered_json(db);
      }
      write_file_atomic(cfg.out / "metrics.json", j.dump(2) + "\n");
      print(j);
    }
  } catch (const Error& e) {
    std::cerr << "cdlink: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "cdlink: " << e.what() << "\n";
    return exit_code(ErrorKind::data);
  }
  return 0;
}
