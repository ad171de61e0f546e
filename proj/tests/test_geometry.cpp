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
#include "gazeforge/geometry.hpp"
#include "gazeforge/rng.hpp"

using namespace gazeforge;

namespace {
const GazeInterval kInterval{-30.0, 14.0, -26.0, 26.0};
}

TEST_CASE("angles_to_vector: axis cases") {
    const GazeVector zero = angles_to_vector({0, 0});
    CHECK(zero.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(zero.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(zero.z == doctest::Approx(-1.0).epsilon(1e-12));

    const GazeVector up = angles_to_vector({90, 0});
    CHECK(up.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(up.y == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(up.z) < 1e-12);
}

TEST_CASE("angles_to_vector: always unit norm") {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const GazeAngles a{rng.uniform(-89, 89), rng.uniform(-180, 180)};
        const GazeVector v = angles_to_vector(a);
        CHECK(std::abs(std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z) - 1.0) < 1e-12);
    }
}

TEST_CASE("vector_to_angles: inverse of angles_to_vector on the interval") {
    Rng rng(6);
    for (int i = 0; i < 1000; ++i) {
        const GazeAngles a{rng.uniform(kInterval.pitch_min, kInterval.pitch_max),
                           rng.uniform(kInterval.yaw_min, kInterval.yaw_max)};
        const GazeAngles back = vector_to_angles(angles_to_vector(a));
        CHECK(back.pitch == doctest::Approx(a.pitch).epsilon(1e-9));
        CHECK(back.yaw == doctest::Approx(a.yaw).epsilon(1e-9));
    }
    CHECK_THROWS_AS(vector_to_angles({0, 0, 0}), std::invalid_argument);
}

TEST_CASE("angular_error: degenerate and analytic cases") {
    const GazeVector g = angles_to_vector({5, -3});
    CHECK(angular_error_deg(g, g) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(angular_error_deg(g, {-g.x, -g.y, -g.z}) == doctest::Approx(180.0).epsilon(1e-12));
    CHECK(angular_error_deg(angles_to_vector({0, 0}), angles_to_vector({4, 0})) ==
          doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("angular_error: symmetric and triangle inequality on random triples") {
    Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        const GazeVector a = angles_to_vector({rng.uniform(-80, 80), rng.uniform(-170, 170)});
        const GazeVector b = angles_to_vector({rng.uniform(-80, 80), rng.uniform(-170, 170)});
        const GazeVector c = angles_to_vector({rng.uniform(-80, 80), rng.uniform(-170, 170)});
        CHECK(angular_error_deg(a, b) == doctest::Approx(angular_error_deg(b, a)).epsilon(1e-9));
        CHECK(angular_error_deg(a, c) <= angular_error_deg(a, b) + angular_error_deg(b, c) + 1e-9);
    }
}

TEST_CASE("project_to_screen: zero gaze with zero offset lands at the origin") {
    ScreenGeometry geom;
    geom.eye_distance_mm = 500.0;
    const Vec2 p = project_to_screen({0, 0}, geom);
    CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("project_to_screen: pure yaw gives x = -d tan(yaw)") {
    ScreenGeometry geom;
    geom.eye_distance_mm = 500.0;
    for (double yaw : {-20.0, -5.0, 5.0, 20.0}) {
        const Vec2 p = project_to_screen({0, yaw}, geom);
        CHECK(p.x == doctest::Approx(-500.0 * std::tan(deg2rad(yaw))).epsilon(1e-9));
        CHECK(p.y == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("project_to_screen: camera offset shifts the result") {
    ScreenGeometry geom;
    geom.eye_distance_mm = 400.0;
    geom.camera_offset_mm = {30.0, -60.0};
    const Vec2 p = project_to_screen({0, 0}, geom);
    CHECK(p.x == doctest::Approx(30.0));
    CHECK(p.y == doctest::Approx(-60.0));
}

TEST_CASE("project_to_screen: parallel ray rejected") {
    ScreenGeometry geom;
    CHECK_THROWS_AS(project_to_screen({-90, 0}, geom), std::domain_error);
}

TEST_CASE("project_to_screen: finite-difference slope matches the tan derivative") {
    ScreenGeometry geom;
    geom.eye_distance_mm = 500.0;
    const double h = 1e-5;
    for (double yaw : {-15.0, 0.0, 10.0}) {
        const double up = project_to_screen({0, yaw + h}, geom).x;
        const double down = project_to_screen({0, yaw - h}, geom).x;
        const double numeric = (up - down) / (2 * h);
        const double t = deg2rad(yaw);
        const double analytic = -500.0 / (std::cos(t) * std::cos(t)) * (M_PI / 180.0);
        CHECK(numeric == doctest::Approx(analytic).epsilon(1e-6));
    }
}

TEST_CASE("clamp_to_interval: paper interval bounds and idempotence") {
    const GazeAngles inside = clamp_to_interval({0, 0}, kInterval);
    CHECK(inside.pitch == 0.0);
    CHECK(inside.yaw == 0.0);

    const GazeAngles high = clamp_to_interval({20, 0}, kInterval);
    CHECK(high.pitch == 14.0);
    CHECK(high.yaw == 0.0);

    const GazeAngles low = clamp_to_interval({-40, -40}, kInterval);
    CHECK(low.pitch == -30.0);
    CHECK(low.yaw == -26.0);

    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const GazeAngles a{rng.uniform(-90, 90), rng.uniform(-90, 90)};
        const GazeAngles once = clamp_to_interval(a, kInterval);
        const GazeAngles twice = clamp_to_interval(once, kInterval);
        CHECK(once.pitch == twice.pitch);
        CHECK(once.yaw == twice.yaw);
        CHECK(kInterval.contains(once));
    }
}
