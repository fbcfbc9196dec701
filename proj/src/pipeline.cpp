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
#include "cdlink/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "cdlink/cloudmask.hpp"
#include "cdlink/error.hpp"
#include "cdlink/io.hpp"
#include "cdlink/parallel.hpp"
#include "cdlink/raster.hpp"
#include "cdlink/selection.hpp"
#include "cdlink/synthetic.hpp"

namespace cdlink {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr Stage kStages[] = {Stage::normalize, Stage::cloudmask, Stage::score,  Stage::calibrate,
                             Stage::select,    Stage::link,      Stage::energy, Stage::metrics};

/// Runs fn, prefixing any error with the stage name.
template <class Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    rethrow_with_stage(e, stage);
  } catch (const fs::filesystem_error& e) {
    rethrow_with_stage(DataError(e.what()), stage);
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

BinaryMap checkerboard(Shape shape, bool even) {
  auto map = BinaryMap::zeros(shape);
  for (std::size_t r = 0; r < shape.height; ++r) {
    for (std::size_t c = 0; c < shape.width; ++c) map.set(r, c, ((r + c) % 2 == 0) == even);
  }
  return map;
}

/// Baseline cloud detection run tile by tile, tiles spread over worker threads.
ScoreMap detect_clouds_tiled(const BandStack& rgbnir, const CloudConfig& config, std::size_t tile_size,
                             std::size_t threads) {
  const auto tiles = tile(rgbnir, tile_size, tile_size);
  std::vector<std::optional<Tile>> prob_tiles(tiles.size());
  detail::parallel_for(tiles.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto p = detect_clouds_baseline(tiles[k].stack, config);
      prob_tiles[k] = Tile{tiles[k].row0, tiles[k].col0,
                           BandStack(p.shape(), {"cloud"}, {p.values().begin(), p.values().end()})};
    }
  });
  std::vector<Tile> done;
  done.reserve(prob_tiles.size());
  for (auto& t : prob_tiles) done.push_back(std::move(*t));
  const auto stitched = stitch(done, rgbnir.shape());
  return ScoreMap(stitched.shape(), {stitched.samples().begin(), stitched.samples().end()});
}

class ArtifactWriter {
 public:
  ArtifactWriter(fs::path dir, RunReport& report) : dir_(std::move(dir)), report_(report) {}

  void stack(const std::string& stem, const BandStack& s) {
    store_band_stack(s, dir_ / stem);
    note_pair(stem);
  }
  void scores(const std::string& stem, const ScoreMap& m) {
    store_score_map(m, dir_ / stem);
    note_pair(stem);
  }
  void mask(const std::string& stem, const BinaryMap& m) {
    store_binary_map(m, dir_ / stem);
    note_pair(stem);
  }
  void text(const std::string& name, const std::string& body) {
    write_file_atomic(dir_ / name, body);
    report_.files.push_back(name);
  }
  void json(const std::string& name, const ordered_json& j) { text(name, j.dump(2) + "\n"); }

 private:
  void note_pair(const std::string& stem) {
    report_.files.push_back(stem + ".json");
    report_.files.push_back(stem + ".bin");
  }

  fs::path dir_;
  RunReport& report_;
};

ordered_json optional_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::normalize: return "normalize";
    case Stage::cloudmask: return "cloudmask";
    case Stage::score: return "score";
    case Stage::calibrate: return "calibrate";
    case Stage::select: return "select";
    case Stage::link: return "link";
    case Stage::energy: return "energy";
    case Stage::metrics: return "metrics";
  }
  return "?";
}

Stage parse_stage(const std::string& name) {
  for (Stage s : kStages) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown stage '" + name + "'");
}

RunReport run_pipeline(const PipelineConfig& config, std::optional<Stage> stop_after) {
  in_stage("config", [&] { config.validate(); });
  in_stage("output", [&] { fs::create_directories(config.out); });

  RunReport report;
  ArtifactWriter write(config.out, report);
  const auto finish = [&](Stage stage) {
    report.completed_stage = to_string(stage);
    report.generated_at = utc_timestamp();
    in_stage("report", [&] { write_file_atomic(config.out / "report.json", to_json(report).dump(2) + "\n"); });
    return report;
  };
  const auto stop_here = [&](Stage stage) { return stop_after && *stop_after == stage; };

  // Inputs: file pair or a synthetic scene.
  struct Inputs {
    BandStack reference;
    BandStack observed;
    std::optional<BinaryMap> truth;
  };
  const Inputs in = in_stage("load", [&]() -> Inputs {
    if (config.reference) {
      auto ref = load_band_stack(*config.reference);
      auto obs = load_band_stack(*config.observed);
      if (ref.shape() != obs.shape() || ref.band_labels() != obs.band_labels()) {
        throw DataError("reference and observed images differ in geometry or bands");
      }
      std::optional<BinaryMap> truth;
      if (config.truth_change) truth = load_binary_map(*config.truth_change, ref.shape());
      report.source = "files";
      return {std::move(ref), std::move(obs), std::move(truth)};
    }
    auto scene = generate_synthetic(config.synthetic);
    write.stack("reference", scene.reference);
    write.stack("observed", scene.observed);
    write.mask("truth_change", scene.truth_change);
    write.mask("truth_cloud", scene.truth_cloud);
    report.source = "synthetic";
    report.seed = config.synthetic.seed;
    return {std::move(scene.reference), std::move(scene.observed), std::move(scene.truth_change)};
  });
  const Shape shape = in.reference.shape();
  report.shape = shape;
  report.bands = in.reference.bands();

  // Band selection and standardization, each image against its own statistics.
  struct Normalized {
    BandStack ref_cloud, obs_cloud, ref_change, obs_change;
  };
  const Normalized norm = in_stage("normalize", [&]() -> Normalized {
    const auto z = [&](const BandStack& s, const std::vector<std::string>& bands) {
      return zscore_normalize(select_bands(s, bands), config.threads);
    };
    return {z(in.reference, config.cloud_bands), z(in.observed, config.cloud_bands), z(in.reference, config.change_bands),
            z(in.observed, config.change_bands)};
  });
  if (stop_here(Stage::normalize)) return finish(Stage::normalize);

  // Cloud removal.
  const BinaryMap cloud = in_stage("cloudmask", [&] {
    const ScoreMap prob = config.cloud_probability
                              ? load_cloud_probability(*config.cloud_probability, shape)
                              : detect_clouds_tiled(norm.obs_cloud, config.cloud, config.tile_size, config.threads);
    BinaryMap mask = binarize(prob, config.cloud.gamma);
    if (config.mask_reference) {
      const auto ref_prob = detect_clouds_tiled(norm.ref_cloud, config.cloud, config.tile_size, config.threads);
      mask = mask_union(mask, binarize(ref_prob, config.cloud.gamma));
    }
    write.scores("cloud_probability", prob);
    write.mask("cloud_mask", mask);
    return mask;
  });
  report.cloud_pixels = cloud.count();
  if (stop_here(Stage::cloudmask)) return finish(Stage::cloudmask);

  // Change scoring on the cloud-removed pair.
  const ScoreMap scores = in_stage("score", [&] {
    ScoreMap s = [&] {
      if (config.scorer.kind == ScorerKind::external_file) {
        return mask_scores(load_score_map(*config.scorer.external_path, shape), cloud, config.scorer.masked_pixel_score);
      }
      const auto obs_clear = apply_mask(norm.obs_change, cloud);
      const auto ref_used = config.mask_reference ? apply_mask(norm.ref_change, cloud) : norm.ref_change;
      return score_changes_baseline(ref_used, obs_clear, cloud, config.scorer.masked_pixel_score, config.threads);
    }();
    write.scores("change_scores", s);
    write.text("cumulative_download.csv", download_csv(cumulative_download_curve(s)));
    return s;
  });
  if (stop_here(Stage::score)) return finish(Stage::score);

  // Threshold: calibrated against the miss-rate bound, or given.
  const double tau = in_stage("calibrate", [&] {
    CalibrationSummary summary;
    summary.epsilon = config.epsilon;
    if (config.tau) {
      summary.source = "override";
      summary.tau = *config.tau;
    } else {
      if (!in.truth) throw ConfigError("calibration needs a ground-truth change map, or set tau");
      summary.source = "calibrated";
      const bool split = config.calibration_split == CalibrationSplit::checkerboard;
      const auto calib = checkerboard(shape, true);
      const auto held = checkerboard(shape, false);
      summary.result = calibrate_threshold(scores, *in.truth, config.epsilon, split ? &calib : nullptr);
      summary.tau = summary.result->tau;
      const auto [rate, n] = miss_rate(segment(scores, summary.tau), *in.truth, split ? &held : nullptr);
      summary.heldout_n_changed = n;
      if (n > 0) summary.heldout_miss_rate = rate;
      write.json("calibration.json", to_json(*summary.result));
    }
    report.calibration = summary;
    return summary.tau;
  });
  if (stop_here(Stage::calibrate)) return finish(Stage::calibrate);

  // Segmentation and transmission decision alpha = s^p.
  const VolumeConfig volume{in.observed.bands(), config.bits_per_sample.value_or(static_cast<std::size_t>(in.observed.bit_depth())),
                            config.coordinate_overhead};
  const Selection selection = in_stage("select", [&] {
    const BinaryMap prediction = segment(scores, tau);
    Selection sel = build_selection(prediction, volume);
    write.mask("prediction", prediction);
    write.mask("selection", sel.alpha);
    write.json("selection.meta.json", ordered_json{{"volume_bits", sel.volume_bits},
                                                  {"overhead_mode", to_string(volume.coordinate_overhead)},
                                                  {"D", volume.bands_per_pixel},
                                                  {"b", volume.bits_per_sample}});
    if (in.truth) {
      report.confusion_all = confusion(prediction, *in.truth);
      if (config.calibration_split == CalibrationSplit::checkerboard) {
        const auto calib = checkerboard(shape, true);
        report.confusion_calibration = confusion(prediction, *in.truth, &calib);
      } else {
        report.confusion_calibration = report.confusion_all;
      }
    }
    return sel;
  });
  report.selection = SelectionSummary{selection.alpha.count(),
                                      static_cast<double>(selection.alpha.count()) / static_cast<double>(shape.pixels()),
                                      selection.volume_bits,
                                      to_string(volume.coordinate_overhead),
                                      volume.bands_per_pixel,
                                      volume.bits_per_sample};
  if (stop_here(Stage::select)) return finish(Stage::select);

  // Downlink budget at the configured instant of the pass.
  const LinkBudget link = in_stage("link", [&] {
    const auto table = config.modcod ? ModcodTable::load_csv(*config.modcod) : ModcodTable::dvbs2();
    LinkBudget lb = evaluate_link(config.pass, config.link, table, config.transmit_time_s);
    report.link = lb;
    if (!lb.rate) {
      finish(Stage::select);
      throw LinkOutage("SNR " + std::to_string(lb.snr.db) + " dB is below every MODCOD threshold");
    }
    return lb;
  });
  if (stop_here(Stage::link)) return finish(Stage::link);

  report.energy = in_stage("energy", [&] {
    auto er = total_energy(selection, volume, link.rate->rate_bps, link.rate->modcod.name, config.link.p_tx_w, config.energy);
    write.json("energy.json", to_json(er));
    return er;
  });
  if (stop_here(Stage::energy)) return finish(Stage::energy);

  // Gateway reconstruction and quality metrics.
  in_stage("metrics", [&] {
    const auto reconstruction = reconstruct(in.reference, transmission_set(in.observed, selection.alpha));
    write.stack("reconstruction", reconstruction);
    report.psnr_max_value = config.psnr_max_value.value_or(std::ldexp(1.0, in.observed.bit_depth()) - 1.0);
    report.psnr_db = psnr(reconstruction, in.observed, report.psnr_max_value);
    if (in.truth) {
      const std::size_t changed = in.truth->count();
      if (changed > 0 && changed < shape.pixels()) {
        const auto roc = roc_auc(scores, *in.truth);
        report.auc = roc.auc;
        write.text("roc.csv", roc_csv(roc));
      }
      write.text("score_histograms.csv", histograms_csv(score_histograms(scores, *in.truth, config.histogram_bins)));
    }
  });
  return finish(Stage::metrics);
}

// ---------------------------------------------------------------------------
// JSON

ordered_json to_json(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}, {"tpr", c.tpr()}, {"fpr", c.fpr()}};
}

ordered_json to_json(const CalibrationResult& r) {
  return {{"tau", r.tau},
          {"achieved_miss_rate", r.achieved_miss_rate},
          {"n_changed", r.n_changed},
          {"allowed_misses", r.allowed_misses},
          {"misses", r.misses}};
}

ordered_json to_json(const EnergyReport& r) {
  return {{"volume_bits", r.volume_bits},           {"transmit_bits", r.transmit_bits},
          {"rate_bps", r.rate_bps},                 {"modcod_name", r.modcod_name},
          {"e_proc_j", r.e_proc_j},                 {"e_trans_j", r.e_trans_j},
          {"e_total_j", r.e_total_j},               {"baseline_total_j", r.baseline_total_j},
          {"savings_fraction", r.savings_fraction}};
}

ordered_json to_json(const LinkBudget& lb) {
  ordered_json j{{"t_s", lb.t_s}, {"slant_range_m", lb.slant_range_m}, {"snr_linear", lb.snr.linear}, {"snr_db", lb.snr.db}};
  if (lb.rate) {
    j["outage"] = false;
    j["modcod"] = lb.rate->modcod.name;
    j["spectral_efficiency"] = lb.rate->modcod.spectral_efficiency;
    j["gamma_min_db"] = lb.rate->modcod.gamma_min_db;
    j["rate_bps"] = lb.rate->rate_bps;
  } else {
    j["outage"] = true;
  }
  return j;
}

ordered_json to_json(const RunReport& r) {
  ordered_json j;
  j["scene"] = {{"height", r.shape.height}, {"width", r.shape.width}, {"bands", r.bands}, {"source", r.source}};
  if (r.seed) j["scene"]["seed"] = *r.seed;
  j["completed_stage"] = r.completed_stage;
  j["cloud"] = {{"pixels", r.cloud_pixels},
                {"fraction", r.shape.pixels() ? static_cast<double>(r.cloud_pixels) / static_cast<double>(r.shape.pixels()) : 0.0}};
  if (r.calibration) {
    const auto& c = *r.calibration;
    ordered_json cj{{"source", c.source}, {"tau", c.tau}, {"epsilon", c.epsilon}};
    if (c.result) {
      cj["calibration_set"] = to_json(*c.result);
      cj["heldout_miss_rate"] = optional_json(c.heldout_miss_rate);
      cj["heldout_n_changed"] = c.heldout_n_changed;
    }
    j["calibration"] = cj;
  }
  if (r.confusion_all) j["confusion"] = to_json(*r.confusion_all);
  if (r.confusion_calibration) j["confusion_calibration_set"] = to_json(*r.confusion_calibration);
  if (r.selection) {
    const auto& s = *r.selection;
    j["selection"] = {{"selected_pixels", s.selected_pixels}, {"selected_fraction", s.selected_fraction},
                      {"volume_bits", s.volume_bits},         {"overhead_mode", s.overhead_mode},
                      {"D", s.bands_per_pixel},               {"b", s.bits_per_sample}};
  }
  if (r.link) j["link"] = to_json(*r.link);
  if (r.energy) j["energy"] = to_json(*r.energy);
  if (r.auc) j["roc"] = {{"auc", *r.auc}};
  if (r.psnr_db) {
    // Infinite PSNR is written as the string "inf", never as a JSON number.
    j["psnr"] = {{"db", std::isinf(*r.psnr_db) ? ordered_json("inf") : ordered_json(*r.psnr_db)},
                 {"max_value", r.psnr_max_value}};
  }
  j["files"] = r.files;
  j["generated_at"] = r.generated_at;
  return j;
}

}  // namespace cdlink
