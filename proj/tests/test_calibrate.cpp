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
#include <fstream>

#include "doctest.h"
#include "gazeforge/calibrate.hpp"
#include "gazeforge/rng.hpp"
#include "testutil.hpp"

using namespace gazeforge;

namespace {

GazePointPair make_pair_at(Vec2 pred, Vec2 gt, const std::string& id = "p",
                           const std::string& subject = "s") {
    GazePointPair p;
    p.pred = pred;
    p.gt = gt;
    p.sample_id = id;
    p.subject = subject;
    return p;
}

// Subject with gt = a * pred + b exactly.
std::vector<GazePointPair> affine_subject(Rng& rng, Vec2 slope, Vec2 intercept, int n,
                                          double noise = 0.0) {
    std::vector<GazePointPair> out;
    for (int i = 0; i < n; ++i) {
        const Vec2 pred{rng.uniform(-120, 120), rng.uniform(-80, 80)};
        const Vec2 gt{slope.x * pred.x + intercept.x + noise * rng.normal(),
                      slope.y * pred.y + intercept.y + noise * rng.normal()};
        out.push_back(make_pair_at(pred, gt, "p" + std::to_string(i)));
    }
    return out;
}

}  // namespace

TEST_CASE("select_center_points: averages the k nearest-to-center pairs") {
    std::vector<GazePointPair> pairs = {
        make_pair_at({1, 1}, {100, 0}, "far"),
        make_pair_at({2, 2}, {1, 1}, "near1"),
        make_pair_at({4, 4}, {-2, 0}, "near2"),
        make_pair_at({6, 6}, {0, 3}, "near3"),
    };
    const GazePointPair mean = select_center_points(pairs, 3);
    CHECK(mean.gt.x == doctest::Approx((1 - 2 + 0) / 3.0));
    CHECK(mean.gt.y == doctest::Approx((1 + 0 + 3) / 3.0));
    CHECK(mean.pred.x == doctest::Approx((2 + 4 + 6) / 3.0));

    // Three pairs total: their means.
    std::vector<GazePointPair> three(pairs.begin() + 1, pairs.end());
    const GazePointPair all = select_center_points(three, 3);
    CHECK(all.pred.x == doctest::Approx(4.0));
    CHECK_THROWS_AS(select_center_points(three, 4), std::invalid_argument);
}

TEST_CASE("select_center_points: distance ties keep the earliest pair") {
    std::vector<GazePointPair> pairs = {
        make_pair_at({10, 0}, {5, 0}, "first"),
        make_pair_at({20, 0}, {-5, 0}, "second"),  // same distance from center
        make_pair_at({30, 0}, {50, 0}, "far"),
    };
    const GazePointPair one = select_center_points(pairs, 1);
    CHECK(one.pred.x == doctest::Approx(10.0));
}

TEST_CASE("select_anchor_points: one averaged pair per anchor") {
    Rng rng(21);
    // Clusters of three pairs around the extent center and the four corners.
    std::vector<GazePointPair> pairs;
    const std::vector<Vec2> centers = {{0, 0}, {-100, -60}, {100, -60}, {-100, 60}, {100, 60}};
    for (const Vec2& c : centers)
        for (int k = 0; k < 3; ++k)
            pairs.push_back(make_pair_at({c.x + rng.uniform(-1, 1), c.y + rng.uniform(-1, 1)},
                                         {c.x + rng.uniform(-2, 2), c.y + rng.uniform(-2, 2)}));
    const auto anchors = screen_anchors_from_extent(pairs);
    REQUIRE(anchors.size() == 5);
    const auto averaged = select_anchor_points(pairs, anchors, 3);
    REQUIRE(averaged.size() == 5);
    // Each averaged pair sits near its cluster center.
    for (size_t i = 0; i < averaged.size(); ++i) {
        bool matched = false;
        for (const Vec2& c : centers)
            matched = matched || (averaged[i].gt - c).norm() < 4.0;
        CHECK(matched);
    }
    // Exact affine data stays exactly recoverable through the averaging.
    std::vector<GazePointPair> affine;
    for (const Vec2& c : centers)
        for (int k = 0; k < 3; ++k) {
            const Vec2 pred{c.x + rng.uniform(-3, 3), c.y + rng.uniform(-3, 3)};
            affine.push_back(make_pair_at(pred, {2.0 * pred.x + 5.0, 0.5 * pred.y - 3.0}));
        }
    const CalibrationModel m =
        fit_npoint(select_anchor_points(affine, screen_anchors_from_extent(affine), 3));
    CHECK(m.slope_x == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(m.intercept_y == doctest::Approx(-3.0).epsilon(1e-9));
}

TEST_CASE("fit_one_point: intercept-only correction") {
    const CalibrationModel identity = fit_one_point(make_pair_at({3, 4}, {3, 4}));
    CHECK(identity.slope_x == 1.0);
    CHECK(identity.intercept_x == doctest::Approx(0.0));
    CHECK(identity.intercept_y == doctest::Approx(0.0));

    const CalibrationModel shifted = fit_one_point(make_pair_at({10, 5}, {0, 0}));
    CHECK(shifted.intercept_x == doctest::Approx(-10.0));
    CHECK(shifted.intercept_y == doctest::Approx(-5.0));

    // Applying the model to the calibration point recovers the ground truth.
    const Vec2 corrected = apply(shifted, {10, 5});
    CHECK(corrected.x == doctest::Approx(0.0));
    CHECK(corrected.y == doctest::Approx(0.0));
}

TEST_CASE("fit_npoint: recovers exact affine relations") {
    Rng rng(3);
    const auto pairs = affine_subject(rng, {2.0, 0.5}, {3.0, -7.0}, 12);
    const CalibrationModel m = fit_npoint(pairs);
    CHECK(m.slope_x == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(m.intercept_x == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(m.slope_y == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(m.intercept_y == doctest::Approx(-7.0).epsilon(1e-9));
    CHECK(!m.degenerate_fallback);
    CHECK(evaluate_pairs(pairs, m).d2 == doctest::Approx(0.0).epsilon(1e-9));

    // Two distinct points interpolate exactly.
    std::vector<GazePointPair> two = {make_pair_at({0, 0}, {3, -7}),
                                      make_pair_at({1, 2}, {5, -6})};
    const CalibrationModel exact = fit_npoint(two);
    CHECK(evaluate_pairs(two, exact).d2 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(fit_npoint(std::vector<GazePointPair>{two[0]}), std::invalid_argument);
}

TEST_CASE("fit_npoint: identical predictions fall back to intercept-only") {
    std::vector<GazePointPair> pairs = {make_pair_at({5, 5}, {1, 1}),
                                        make_pair_at({5, 5}, {3, 3})};
    const CalibrationModel m = fit_npoint(pairs);
    CHECK(m.degenerate_fallback);
    CHECK(m.slope_x == 1.0);
    CHECK(m.intercept_x == doctest::Approx(-3.0));  // mean gt 2 - mean pred 5
}

TEST_CASE("fit_npoint: residuals orthogonal to predictions (normal equations)") {
    Rng rng(5);
    const auto pairs = affine_subject(rng, {1.4, 0.8}, {10.0, -2.0}, 30, 5.0);
    const CalibrationModel m = fit_npoint(pairs);
    double dot_x = 0.0, sum_x = 0.0;
    for (const auto& p : pairs) {
        const double r = p.gt.x - (m.slope_x * p.pred.x + m.intercept_x);
        dot_x += r * p.pred.x;
        sum_x += r;
    }
    CHECK(std::abs(dot_x) < 1e-6);
    CHECK(std::abs(sum_x) < 1e-9);
}

TEST_CASE("apply: identity model never changes a prediction") {
    const CalibrationModel identity;
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const Vec2 p{rng.uniform(-200, 200), rng.uniform(-200, 200)};
        const Vec2 q = apply(identity, p);
        CHECK(q.x == p.x);
        CHECK(q.y == p.y);
    }
}

TEST_CASE("mpii_protocol: exact recovery on noiseless affine subjects") {
    Rng rng(9);
    std::map<std::string, std::vector<GazePointPair>> subjects;
    subjects["s1"] = affine_subject(rng, {1.5, 0.7}, {20.0, -10.0}, 25);
    subjects["s2"] = affine_subject(rng, {0.9, 1.2}, {-5.0, 12.0}, 25);
    const MpiiProtocolResult r = mpii_protocol(subjects, 3, 9, 42);
    CHECK(r.mean.d2 == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.per_subject.at("s1").dx == doctest::Approx(0.0).epsilon(1e-9));

    // Intercept-only bias, one calibration point: also exact.
    std::map<std::string, std::vector<GazePointPair>> shift;
    shift["s"] = affine_subject(rng, {1.0, 1.0}, {8.0, -3.0}, 20);
    const MpiiProtocolResult one = mpii_protocol(shift, 1, 9, 42);
    CHECK(one.mean.d2 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("mpii_protocol: deterministic for a fixed seed") {
    Rng rng(11);
    std::map<std::string, std::vector<GazePointPair>> subjects;
    subjects["s1"] = affine_subject(rng, {1.2, 0.9}, {5.0, 5.0}, 15, 4.0);
    const MpiiProtocolResult a = mpii_protocol(subjects, 5, 9, 7);
    const MpiiProtocolResult b = mpii_protocol(subjects, 5, 9, 7);
    CHECK(a.mean.d2 == b.mean.d2);
    CHECK(a.per_subject.at("s1").dx == b.per_subject.at("s1").dx);
    const MpiiProtocolResult c = mpii_protocol(subjects, 5, 9, 8);
    CHECK(a.mean.d2 != c.mean.d2);

    CHECK_THROWS_AS(mpii_protocol(subjects, 15, 9, 7), std::invalid_argument);
}

TEST_CASE("mpii_protocol: median error non-increasing in the point count") {
    Rng rng(13);
    std::map<std::string, std::vector<GazePointPair>> subjects;
    for (int s = 0; s < 4; ++s)
        subjects["s" + std::to_string(s)] =
            affine_subject(rng, {1.0, 1.0},
                           {rng.uniform(-30, 30), rng.uniform(-30, 30)}, 60, 6.0);
    double prev = 1e18;
    for (int n : {2, 5, 10, 20}) {
        const MpiiProtocolResult r = mpii_protocol(subjects, n, 9, 31);
        CHECK(r.mean.d2 <= prev + 0.75);  // sampling noise allowance
        prev = r.mean.d2;
    }
}

TEST_CASE("CSV pairs and model JSON round-trip") {
    gftest::TempDir dir("calib");
    {
        std::ofstream os(dir.file("pairs.csv"));
        os << "sample_id,pred_x_mm,pred_y_mm,gt_x_mm,gt_y_mm,subject,session\n";
        os << "a,1.5,2.5,3.0,4.0,s1,b\n";
        os << "b,-1.0,0.0,0.5,0.25,s2,c\n";
    }
    const auto pairs = load_point_pairs(dir.file("pairs.csv"));
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].pred.x == doctest::Approx(1.5));
    CHECK(pairs[0].gt.y == doctest::Approx(4.0));
    CHECK(pairs[1].subject == "s2");
    CHECK(pairs[1].session == "c");

    CalibrationModel m;
    m.slope_x = 1.25;
    m.intercept_y = -3.5;
    const CalibrationModel back = model_from_json(model_to_json(m));
    CHECK(back.slope_x == doctest::Approx(1.25));
    CHECK(back.intercept_y == doctest::Approx(-3.5));
}
