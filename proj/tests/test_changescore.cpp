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

#include <algorithm>
#include <numeric>
#include <set>

#include "cdlink/changescore.hpp"
#include "cdlink/error.hpp"
#include "cdlink/io.hpp"
#include "test_util.hpp"

using namespace cdlink;
using cdlink::test::Gen;
using cdlink::test::TempDir;

namespace {

// Largest candidate threshold (a changed score, or 0) whose miss count stays within floor(eps * n).
double sweep_max_tau(const std::vector<double>& changed, double epsilon) {
  const auto allowed = static_cast<std::size_t>(std::floor(epsilon * static_cast<double>(changed.size())));
  double best = -1.0;
  for (double t : changed) {
    const auto misses = std::count_if(changed.begin(), changed.end(), [t](double s) { return s < t; });
    if (static_cast<std::size_t>(misses) <= allowed) best = std::max(best, t);
  }
  return best;
}

std::vector<std::size_t> argsort(const ScoreMap& s) {
  std::vector<std::size_t> idx(s.values().size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return s.at_index(a) < s.at_index(b); });
  return idx;
}

}  // namespace

TEST_CASE("baseline scorer examples") {
  const BandStack zero({1, 2}, {"B1"}, {0, 0});
  const BandStack moved({1, 2}, {"B1"}, {3, 4});
  const auto none = BinaryMap::zeros({1, 2});

  const auto same = score_changes_baseline(zero, zero, none);
  CHECK(cdlink::test::vec(same.values()) == std::vector<double>{0, 0});

  const auto s = score_changes_baseline(zero, moved, none);
  CHECK(s.at_index(0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(s.at_index(1) == 1.0);

  Gen gen(1);
  const auto ref = gen.stack({4, 5}, 3);
  std::vector<double> obs(ref.samples().begin(), ref.samples().end());
  obs[7] += 2.5;
  const auto one = score_changes_baseline(ref, BandStack(ref.shape(), ref.band_labels(), obs), BinaryMap::zeros({4, 5}));
  for (std::size_t i = 0; i < 20; ++i) CHECK(one.at_index(i) == (i == 7 ? 1.0 : 0.0));
}

TEST_CASE("baseline scorer assigns masked pixels the configured score") {
  const BandStack ref({1, 3}, {"B1"}, {0, 0, 0});
  const BandStack obs({1, 3}, {"B1"}, {1, 2, 100});
  const BinaryMap cloud({1, 3}, {0, 0, 1});
  const auto s = score_changes_baseline(ref, obs, cloud);
  CHECK(cdlink::test::vec(s.values()) == std::vector<double>{0.5, 1.0, 0.0});
  CHECK(score_changes_baseline(ref, obs, cloud, 0.25).at_index(2) == 0.25);
  CHECK_THROWS_AS(score_changes_baseline(ref, obs, BinaryMap::zeros({3, 1})), DataError);
}

TEST_CASE("baseline scores are invariant under a common band permutation") {
  Gen gen(2);
  for (int trial = 0; trial < 30; ++trial) {
    const Shape shape{1 + gen.index(6), 1 + gen.index(6)};
    const std::size_t bands = 2 + gen.index(3);
    const auto ref = gen.stack(shape, bands);
    const auto obs = gen.stack(shape, bands);
    std::vector<std::string> order = ref.band_labels();
    std::reverse(order.begin(), order.end());
    const auto cloud = gen.binary(shape, 0.2);
    const auto a = score_changes_baseline(ref, obs, cloud);
    const auto b = score_changes_baseline(select_bands(ref, order), select_bands(obs, order), cloud);
    for (std::size_t i = 0; i < shape.pixels(); ++i) CHECK(a.at_index(i) == doctest::Approx(b.at_index(i)).epsilon(1e-12));
  }
}

TEST_CASE("scaling both inputs preserves the score ranking") {
  Gen gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Shape shape{3, 7};
    const auto ref = gen.stack(shape, 3);
    const auto obs = gen.stack(shape, 3);
    const double k = gen.uniform(0.1, 10.0);
    auto scale = [k](const BandStack& s) {
      std::vector<double> v(s.samples().begin(), s.samples().end());
      for (auto& x : v) x *= k;
      return BandStack(s.shape(), s.band_labels(), v);
    };
    const auto none = BinaryMap::zeros(shape);
    CHECK(argsort(score_changes_baseline(ref, obs, none)) ==
          argsort(score_changes_baseline(scale(ref), scale(obs), none)));
  }
}

TEST_CASE("segment is inclusive and antitone in tau") {
  const ScoreMap s({1, 4}, {0.1, 0.6, 0.6, 0.9});
  CHECK(cdlink::test::vec(segment(s, 0.6).values()) == std::vector<std::uint8_t>{0, 1, 1, 1});
  CHECK(segment(s, 0.0).count() == 4);
  CHECK(segment(s, 1.0).count() == 0);
  CHECK_THROWS_AS(segment(s, 1.5), ConfigError);

  Gen gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(16);
    for (auto& x : v) x = gen.grid_score();
    const ScoreMap m({4, 4}, v);
    double t1 = gen.grid_score();
    double t2 = gen.grid_score();
    if (t1 > t2) std::swap(t1, t2);
    const auto a = segment(m, t1);
    const auto b = segment(m, t2);
    for (std::size_t i = 0; i < 16; ++i) CHECK(b.at_index(i) <= a.at_index(i));
  }
}

TEST_CASE("calibrate_threshold examples") {
  const ScoreMap s({1, 5}, {0.9, 0.2, 0.0, 0.6, 0.5});
  const BinaryMap truth({1, 5}, {1, 1, 0, 1, 1});

  const auto quarter = calibrate_threshold(s, truth, 0.25);
  CHECK(quarter.tau == 0.5);
  CHECK(quarter.n_changed == 4);
  CHECK(quarter.misses == 1);
  CHECK(quarter.achieved_miss_rate == 0.25);

  const auto strict = calibrate_threshold(s, truth, 0.0);
  CHECK(strict.tau == 0.2);
  CHECK(strict.achieved_miss_rate == 0.0);

  CHECK_THROWS_AS(calibrate_threshold(s, truth, 1.0), ConfigError);
  CHECK_THROWS_AS(calibrate_threshold(s, truth, -0.1), ConfigError);
  CHECK_THROWS_AS(calibrate_threshold(s, BinaryMap::zeros({1, 5}), 0.05), DataError);
}

TEST_CASE("100 changed pixels at epsilon 0.05 pick the sixth-smallest score") {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < 100; ++i) v[i] = static_cast<double>((i * 37) % 100) / 100.0;
  const ScoreMap s({10, 10}, v);
  const auto r = calibrate_threshold(s, BinaryMap::ones({10, 10}), 0.05);
  CHECK(r.tau == doctest::Approx(0.05));
  CHECK(r.misses == 5);
  CHECK(r.allowed_misses == 5);
}

TEST_CASE("calibration yields the largest feasible tau (sweep oracle)") {
  Gen gen(6);
  for (int trial = 0; trial < 300; ++trial) {
    const Shape shape{1 + gen.index(5), 1 + gen.index(5)};
    std::vector<double> v(shape.pixels());
    for (auto& x : v) x = gen.grid_score(8);
    const ScoreMap s(shape, v);
    auto truth = gen.binary(shape, 0.6);
    if (truth.count() == 0) truth.set_index(0, 1);
    const double eps = gen.uniform(0.0, 0.99);

    std::vector<double> changed;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (truth.at_index(i)) changed.push_back(v[i]);

    const auto r = calibrate_threshold(s, truth, eps);
    CHECK(r.tau == sweep_max_tau(changed, eps));
    const auto [rate, n] = miss_rate(segment(s, r.tau), truth);
    CHECK(n == changed.size());
    CHECK(rate <= eps);
    CHECK(rate == r.achieved_miss_rate);
  }
}

TEST_CASE("calibration restricted to a subset only sees that subset") {
  const ScoreMap s({1, 4}, {0.1, 0.9, 0.3, 0.8});
  const BinaryMap truth = BinaryMap::ones({1, 4});
  const BinaryMap odd({1, 4}, {0, 1, 0, 1});
  const auto r = calibrate_threshold(s, truth, 0.0, &odd);
  CHECK(r.n_changed == 2);
  CHECK(r.tau == 0.8);
  const auto [rate, n] = miss_rate(segment(s, r.tau), truth, &odd);
  CHECK(n == 2);
  CHECK(rate == 0.0);
}

TEST_CASE("mask_scores overrides cloud pixels") {
  const ScoreMap s({1, 3}, {0.4, 0.7, 1.0});
  CHECK(cdlink::test::vec(mask_scores(s, BinaryMap({1, 3}, {1, 0, 1}), 0.0).values()) == std::vector<double>{0.0, 0.7, 0.0});
}

TEST_CASE("load_score_map validates range and geometry") {
  TempDir dir("score");
  const ScoreMap s({2, 2}, {0.0, 0.25, 0.5, 1.0});
  store_score_map(s, dir / "ok");
  CHECK(load_score_map(dir / "ok") == s);
  CHECK_THROWS_AS(load_score_map(dir / "ok", Shape{4, 1}), DataError);
  // A band stack file holding 2.0 is a well-formed f32 raster but an invalid score map.
  store_band_stack(BandStack({1, 1}, {"score"}, {2.0}, 32), dir / "bad");
  CHECK_THROWS_AS(load_score_map(dir / "bad"), DataError);
}

TEST_CASE("scorer config and kind parsing") {
  CHECK(parse_scorer_kind("external_file") == ScorerKind::external_file);
  CHECK(to_string(ScorerKind::baseline_distance) == "baseline_distance");
  CHECK_THROWS_AS(parse_scorer_kind("cnn"), ConfigError);
  ScorerConfig cfg;
  cfg.kind = ScorerKind::external_file;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.external_path = "x";
  CHECK_NOTHROW(cfg.validate());
}
