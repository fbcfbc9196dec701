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
#include <numeric>

#include "cdlink/error.hpp"
#include "cdlink/metrics.hpp"
#include "test_util.hpp"

using namespace cdlink;
using cdlink::test::Gen;

namespace {

// Mann-Whitney statistic: fraction of (changed, unchanged) pairs ranked correctly, ties count half.
double pairwise_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0;
  for (double p : pos)
    for (double n : neg) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  return wins / static_cast<double>(pos.size() * neg.size());
}

}  // namespace

TEST_CASE("confusion counts") {
  const BinaryMap pred({1, 4}, {1, 1, 0, 0});
  const BinaryMap truth({1, 4}, {1, 0, 1, 0});
  const auto c = confusion(pred, truth);
  CHECK(c.tp == 1);
  CHECK(c.fp == 1);
  CHECK(c.fn == 1);
  CHECK(c.tn == 1);
  CHECK(c.tpr() == 0.5);
  CHECK(c.fpr() == 0.5);

  const auto same = confusion(truth, truth);
  CHECK(same.fp == 0);
  CHECK(same.fn == 0);
  const auto flipped = confusion(BinaryMap({1, 4}, {0, 1, 0, 1}), truth);
  CHECK(flipped.tp == 0);
  CHECK(flipped.tn == 0);

  const BinaryMap sub({1, 4}, {1, 0, 0, 1});
  CHECK(confusion(pred, truth, &sub).total() == 2);
  CHECK_THROWS_AS(confusion(pred, BinaryMap::zeros({2, 2})), DataError);
}

TEST_CASE("confusion counts always cover every pixel") {
  Gen gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Shape shape{1 + gen.index(9), 1 + gen.index(9)};
    CHECK(confusion(gen.binary(shape), gen.binary(shape)).total() == shape.pixels());
  }
}

TEST_CASE("auc examples") {
  const BinaryMap truth({1, 4}, {1, 1, 0, 0});
  CHECK(roc_auc(ScoreMap({1, 4}, {0.9, 0.3, 0.5, 0.1}), truth).auc == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(roc_auc(ScoreMap({1, 4}, {0.9, 0.8, 0.2, 0.1}), truth).auc == 1.0);
  CHECK(roc_auc(ScoreMap::filled({1, 4}, 0.4), truth).auc == 0.5);
  CHECK_THROWS_AS(roc_auc(ScoreMap::filled({1, 4}, 0.4), BinaryMap::ones({1, 4})), DataError);
}

TEST_CASE("roc curve shape") {
  const auto roc = roc_auc(ScoreMap({1, 5}, {0.9, 0.3, 0.5, 0.5, 0.1}), BinaryMap({1, 5}, {1, 1, 0, 1, 0}));
  REQUIRE(roc.points.size() == 5);  // +inf plus four distinct scores
  CHECK(std::isinf(roc.points.front().threshold));
  CHECK(roc.points.front().fpr == 0.0);
  CHECK(roc.points.front().tpr == 0.0);
  CHECK(roc.points.back().fpr == 1.0);
  CHECK(roc.points.back().tpr == 1.0);
  for (std::size_t k = 1; k < roc.points.size(); ++k) {
    CHECK(roc.points[k].threshold < roc.points[k - 1].threshold);
    CHECK(roc.points[k].fpr >= roc.points[k - 1].fpr);
    CHECK(roc.points[k].tpr >= roc.points[k - 1].tpr);
  }
}

TEST_CASE("auc equals the pairwise statistic") {
  Gen gen(2);
  for (int trial = 0; trial < 300; ++trial) {
    const Shape shape{1 + gen.index(5), 2 + gen.index(4)};
    std::vector<double> v(shape.pixels());
    for (auto& x : v) x = gen.grid_score(gen.coin() ? 4 : 50);
    auto truth = gen.binary(shape);
    truth.set_index(0, true);
    truth.set_index(1, false);
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < v.size(); ++i) (truth.at_index(i) ? pos : neg).push_back(v[i]);
    CHECK(std::abs(roc_auc(ScoreMap(shape, v), truth).auc - pairwise_auc(pos, neg)) < 1e-12);
  }
}

TEST_CASE("psnr examples") {
  const BandStack a({2, 2}, {"B1"}, {0, 0, 0, 0});
  CHECK(psnr(a, a, 255) == kInfinitePsnr);
  CHECK(format_psnr(kInfinitePsnr) == "inf");
  const BandStack b({2, 2}, {"B1"}, {0, 10, 0, 0});
  CHECK(psnr(a, b, 255) == doctest::Approx(10 * std::log10(2601.0)).epsilon(1e-12));
  CHECK(std::abs(psnr(a, b, 255) - 34.15140352) < 1e-8);
  const BandStack c({2, 2}, {"B1"}, {255, 255, 255, 255});
  CHECK(psnr(a, c, 255) == doctest::Approx(0.0));
  CHECK_THROWS_AS(psnr(a, BandStack({1, 4}, {"B1"}, {0, 0, 0, 0}), 255), DataError);
  CHECK_THROWS_AS(psnr(a, b, 0), ConfigError);
}

TEST_CASE("cumulative download curve") {
  const auto ones = cumulative_download_curve(ScoreMap::filled({3, 3}, 1.0));
  REQUIRE(ones.size() == 1);
  CHECK(ones[0].threshold == 1.0);
  CHECK(ones[0].fraction == 1.0);

  std::vector<double> grid(10);
  for (std::size_t i = 0; i < 10; ++i) grid[i] = static_cast<double>(i + 1) / 10.0;
  const ScoreMap g({2, 5}, grid);
  CHECK(download_fraction(g, 0.6) == 0.5);
  CHECK(download_fraction(g, 1.0) == 0.1);
  CHECK(download_fraction(ScoreMap::filled({2, 2}, 0.5), 0.75) == 0.0);
  const auto curve = cumulative_download_curve(g);
  CHECK(curve.size() == 10);
  CHECK(curve.front().threshold == 1.0);
  CHECK(curve.back().fraction == 1.0);
}

TEST_CASE("download curve points match segmentation counts") {
  Gen gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Shape shape{1 + gen.index(8), 1 + gen.index(8)};
    std::vector<double> v(shape.pixels());
    for (auto& x : v) x = gen.grid_score(12);
    const ScoreMap s(shape, v);
    double prev = 0;
    for (const auto& p : cumulative_download_curve(s)) {
      const auto n = std::count_if(v.begin(), v.end(), [&](double x) { return x >= p.threshold; });
      CHECK(p.fraction == static_cast<double>(n) / static_cast<double>(v.size()));
      CHECK(p.fraction > prev);
      prev = p.fraction;
    }
  }
}

TEST_CASE("score histograms") {
  const auto h = score_histograms(ScoreMap({1, 4}, {1.0, 1.0, 0.05, 0.15}), BinaryMap({1, 4}, {1, 1, 0, 0}), 10);
  REQUIRE(h.bin_edges.size() == 11);
  CHECK(h.changed == std::vector<double>{0, 0, 0, 0, 0, 0, 0, 0, 0, 1});
  CHECK(h.unchanged[0] == 0.5);
  CHECK(h.unchanged[1] == 0.5);

  const auto narrow = score_histograms(ScoreMap({1, 3}, {0.41, 0.43, 0.49}), BinaryMap({1, 3}, {1, 1, 1}), 10);
  CHECK(narrow.changed[4] == 1.0);
  CHECK(narrow.unchanged_empty());
  CHECK(std::accumulate(narrow.unchanged.begin(), narrow.unchanged.end(), 0.0) == 0.0);
  CHECK_THROWS_AS(score_histograms(ScoreMap({1, 1}, {0.5}), BinaryMap({1, 1}, {1}), 0), ConfigError);
}

TEST_CASE("histogram mass sums to one per nonempty class") {
  Gen gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Shape shape{2 + gen.index(8), 2 + gen.index(8)};
    std::vector<double> v(shape.pixels());
    for (auto& x : v) x = gen.uniform();
    auto truth = gen.binary(shape);
    truth.set_index(0, true);
    truth.set_index(1, false);
    const auto h = score_histograms(ScoreMap(shape, v), truth, 1 + gen.index(30));
    CHECK(std::abs(std::accumulate(h.changed.begin(), h.changed.end(), 0.0) - 1.0) < 1e-12);
    CHECK(std::abs(std::accumulate(h.unchanged.begin(), h.unchanged.end(), 0.0) - 1.0) < 1e-12);
    CHECK(h.n_changed + h.n_unchanged == shape.pixels());
  }
}

TEST_CASE("csv writers") {
  const auto roc = roc_auc(ScoreMap({1, 2}, {0.25, 0.75}), BinaryMap({1, 2}, {0, 1}));
  CHECK(roc_csv(roc) == "threshold,fpr,tpr\ninf,0,0\n0.75,0,1\n0.25,1,1\n");
  CHECK(download_csv(cumulative_download_curve(ScoreMap({1, 2}, {0.25, 0.75}))) ==
        "threshold,fraction\n0.75,0.5\n0.25,1\n");
}
