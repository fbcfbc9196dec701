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

#include "cdlink/error.hpp"
#include "cdlink/synthetic.hpp"
#include "test_util.hpp"

using namespace cdlink;

TEST_CASE("no change and no noise leaves the observed image equal to the reference") {
  SyntheticSpec spec;
  spec.height = 16;
  spec.width = 12;
  spec.change_fraction = 0;
  spec.cloud_fraction = 0;
  spec.noise_std = 0;
  const auto scene = generate_synthetic(spec);
  CHECK(scene.observed == scene.reference);
  CHECK(scene.truth_change.count() == 0);
  CHECK(scene.truth_cloud.count() == 0);
}

TEST_CASE("change fraction one marks every pixel") {
  SyntheticSpec spec;
  spec.height = 5;
  spec.width = 7;
  spec.change_fraction = 1.0;
  CHECK(generate_synthetic(spec).truth_change == BinaryMap::ones({5, 7}));
}

TEST_CASE("change and cloud counts are round(fraction * pixels)") {
  SyntheticSpec spec;
  spec.height = 10;
  spec.width = 13;
  spec.change_fraction = 0.33;
  spec.cloud_fraction = 0.07;
  const auto scene = generate_synthetic(spec);
  CHECK(scene.truth_change.count() == 43);
  CHECK(scene.truth_cloud.count() == 9);
}

TEST_CASE("same seed gives identical scenes, different seeds differ") {
  SyntheticSpec spec;
  spec.height = 20;
  spec.width = 20;
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  CHECK(a.reference == b.reference);
  CHECK(a.observed == b.observed);
  CHECK(a.truth_change == b.truth_change);
  CHECK(a.truth_cloud == b.truth_cloud);
  spec.seed = 43;
  CHECK_FALSE(generate_synthetic(spec).reference == a.reference);
}

TEST_CASE("generator output matches an independent implementation of the documented algorithm") {
  SyntheticSpec spec;
  spec.height = 4;
  spec.width = 4;
  spec.bands = 4;
  spec.change_fraction = 0.25;
  spec.cloud_fraction = 0.125;
  spec.noise_std = 10.0;
  spec.seed = 7;
  const auto s = generate_synthetic(spec);
  const double ref0[] = {1754.38525390625, 1949.3011474609375, 1117.414306640625, 1891.9132080078125};
  const double obs3[] = {815.05865478515625, 1974.879638671875, 1213.1153564453125, 3620.82373046875};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s.reference.plane(0)[i] == ref0[i]);
    CHECK(s.observed.plane(3)[i] == obs3[i]);
  }
  CHECK(s.observed.plane(0)[15] == 1295.88525390625);
  CHECK(s.observed.plane(2)[5] == 1276.8719482421875);
  CHECK(cdlink::test::vec(s.truth_change.values()) ==
        std::vector<std::uint8_t>{1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0});
  CHECK(cdlink::test::vec(s.truth_cloud.values()) ==
        std::vector<std::uint8_t>{0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0});
}

TEST_CASE("labels and validation") {
  CHECK(default_band_labels(6) == std::vector<std::string>{"R", "G", "B", "Nir", "B5", "B6"});
  CHECK(default_band_labels(2) == std::vector<std::string>{"R", "G"});
  SyntheticSpec spec;
  spec.change_fraction = 1.5;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = SyntheticSpec{};
  spec.height = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = SyntheticSpec{};
  spec.noise_std = -1;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}
