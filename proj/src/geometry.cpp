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

#include "gazeforge/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace gazeforge {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double deg2rad(double deg) { return deg * (kPi / 180.0); }
double rad2deg(double rad) { return rad * (180.0 / kPi); }

GazeVector angles_to_vector(const GazeAngles& a) {
    if (!std::isfinite(a.pitch) || !std::isfinite(a.yaw))
        throw std::invalid_argument("angles_to_vector: non-finite input");
    const double phi = deg2rad(a.pitch);
    const double psi = deg2rad(a.yaw);
    return {-std::cos(phi) * std::sin(psi), -std::sin(phi), -std::cos(phi) * std::cos(psi)};
}

GazeAngles vector_to_angles(const GazeVector& v) {
    const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    if (n < 1e-12) throw std::invalid_argument("vector_to_angles: zero-length vector");
    const double y = v.y / n;
    return {rad2deg(std::asin(std::min(1.0, std::max(-1.0, -y)))),
            rad2deg(std::atan2(-v.x / n, -v.z / n))};
}

double angular_error_deg(const GazeVector& a, const GazeVector& b) {
    const double dot = a.x * b.x + a.y * b.y + a.z * b.z;
    return rad2deg(std::acos(std::min(1.0, std::max(-1.0, dot))));
}

Vec2 project_to_screen(const GazeAngles& a, const ScreenGeometry& geom) {
    if (geom.eye_distance_mm <= 0.0)
        throw std::invalid_argument("project_to_screen: eye distance must be positive");
    const GazeVector g = angles_to_vector(a);
    if (g.z >= -1e-12)
        throw std::domain_error("project_to_screen: gaze ray parallel to or away from screen");
    const double t = -geom.eye_distance_mm / g.z;
    return Vec2{t * g.x, t * g.y} + geom.camera_offset_mm;
}

GazeAngles clamp_to_interval(const GazeAngles& a, const GazeInterval& interval) {
    return {std::min(interval.pitch_max, std::max(interval.pitch_min, a.pitch)),
            std::min(interval.yaw_max, std::max(interval.yaw_min, a.yaw))};
}

}  // namespace gazeforge
