// Copyright 2026 The gazeforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "gazeforge/gridcodec.hpp"
#include "gazeforge/rng.hpp"

using namespace gazeforge;

namespace {
GridSpec default_grid() {
    return GridSpec::from_bin_size({-30.0, 14.0, -26.0, 26.0}, 4.0);
}
}  // namespace

TEST_CASE("grid: default interval with 4-degree bins is 11 x 13 = 143") {
    const GridSpec g = default_grid();
    CHECK(g.n_pitch == 11);
    CHECK(g.n_yaw == 13);
    CHECK(g.total_bins() == 143);
    CHECK(g.bin_size(Axis::Pitch) == doctest::Approx(4.0));
    CHECK(g.bin_size(Axis::Yaw) == doctest::Approx(4.0));
}

TEST_CASE("grid: interval not divisible by the bin size is rejected") {
    CHECK_THROWS_AS(GridSpec::from_bin_size({-30.0, 14.0, -26.0, 26.0}, 3.0),
                    std::invalid_argument);
}

TEST_CASE("discretize: boundary and floor cases") {
    const GridSpec g = default_grid();
    CHECK(discretize({-30.0, -26.0}, g) == std::pair<int, int>{0, 0});
    CHECK(discretize({13.9, 25.9}, g) == std::pair<int, int>{10, 12});
    CHECK(discretize({14.0, 26.0}, g) == std::pair<int, int>{10, 12});
    CHECK_THROWS_AS(discretize({20.0, 0.0}, g), std::out_of_range);
    CHECK_THROWS_AS(discretize({0.0, -27.0}, g), std::out_of_range);
}

TEST_CASE("centroid: exact formula values") {
    const GridSpec g = default_grid();
    CHECK(centroid(0, Axis::Pitch, g) == doctest::Approx(-28.0));
    CHECK(centroid(10, Axis::Pitch, g) == doctest::Approx(12.0));
    CHECK(centroid(6, Axis::Yaw, g) == doctest::Approx(0.0));
    CHECK_THROWS_AS(centroid(11, Axis::Pitch, g), std::out_of_range);
    CHECK_THROWS_AS(centroid(-1, Axis::Yaw, g), std::out_of_range);
}

TEST_CASE("centroid of the assigned bin is within half a bin on both axes") {
    const GridSpec g = default_grid();
    Rng rng(17);
    for (int i = 0; i < 500; ++i) {
        const GazeAngles a{rng.uniform(-30.0, 14.0), rng.uniform(-26.0, 26.0)};
        const auto [cp, cy] = discretize(a, g);
        CHECK(std::abs(centroid(cp, Axis::Pitch, g) - a.pitch) <= 2.0 + 1e-12);
        CHECK(std::abs(centroid(cy, Axis::Yaw, g) - a.yaw) <= 2.0 + 1e-12);

        // Decoding the one-hot of the assigned bin lands on the centroid.
        BinProbabilities hot(g.n_pitch, 0.0);
        hot[cp] = 1.0;
        CHECK(std::abs(decode_expectation(hot, Axis::Pitch, g) - a.pitch) <= 2.0 + 1e-12);
    }
}

TEST_CASE("decode_expectation: one-hot, uniform, and two-bin mixtures") {
    const GridSpec g = default_grid();
    BinProbabilities onehot(11, 0.0);
    onehot[4] = 1.0;
    CHECK(decode_expectation(onehot, Axis::Pitch, g) ==
          doctest::Approx(centroid(4, Axis::Pitch, g)));

    const BinProbabilities uniform(11, 1.0 / 11);
    CHECK(decode_expectation(uniform, Axis::Pitch, g) == doctest::Approx(-8.0).epsilon(1e-9));

    BinProbabilities half(11, 0.0);
    half[0] = 0.5;
    half[1] = 0.5;
    CHECK(decode_expectation(half, Axis::Pitch, g) == doctest::Approx(-26.0));

    BinProbabilities bad(11, 0.2);
    CHECK_THROWS_AS(decode_expectation(bad, Axis::Pitch, g), std::invalid_argument);
}

TEST_CASE("sharpened_softmax: uniform, temperature identity, closed form") {
    const std::vector<double> equal = {1.5, 1.5, 1.5};
    for (double p : sharpened_softmax(equal, 0.5)) CHECK(p == doctest::Approx(1.0 / 3));

    Rng rng(19);
    std::vector<double> logits(7);
    for (double& l : logits) l = rng.uniform(-3, 3);
    std::vector<double> doubled = logits;
    for (double& l : doubled) l *= 2.0;
    const BinProbabilities a = sharpened_softmax(logits, 0.5);
    const BinProbabilities b = sharpened_softmax(doubled, 1.0);
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));

    const std::vector<double> pair = {0.0, std::log(3.0)};
    const BinProbabilities p = sharpened_softmax(pair, 1.0);
    CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("sharpened_softmax: normalized and monotone in logits") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> logits(9);
        for (double& l : logits) l = rng.uniform(-5, 5);
        const BinProbabilities p = sharpened_softmax(logits, 0.5);
        double sum = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        // Raising one logit raises its probability.
        std::vector<double> bumped = logits;
        bumped[3] += 0.5;
        CHECK(sharpened_softmax(bumped, 0.5)[3] > p[3]);
    }
    CHECK_THROWS_AS(sharpened_softmax(std::vector<double>{1.0}, 0.0), std::invalid_argument);
}
