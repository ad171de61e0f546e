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

#pragma once

#include "gazeforge/image.hpp"

namespace gazeforge {

/// Gaze direction in degrees. Positive pitch points up, positive yaw points
/// to the subject's left.
struct GazeAngles {
    double pitch = 0.0;
    double yaw = 0.0;
};

/// Unit 3-vector form of a gaze direction. (0,0) degrees maps to (0,0,-1).
struct GazeVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct GazeInterval {
    double pitch_min = 0.0;
    double pitch_max = 0.0;
    double yaw_min = 0.0;
    double yaw_max = 0.0;

    bool valid() const { return pitch_min < pitch_max && yaw_min < yaw_max; }
    bool contains(const GazeAngles& a) const {
        return a.pitch >= pitch_min && a.pitch <= pitch_max && a.yaw >= yaw_min &&
               a.yaw <= yaw_max;
    }
    double pitch_width() const { return pitch_max - pitch_min; }
    double yaw_width() const { return yaw_max - yaw_min; }
};

/// Screen plane through the camera, perpendicular to the optical axis, with
/// the eye a fixed distance in front of it. Screen x points right, y down.
struct ScreenGeometry {
    Vec2 camera_offset_mm;        // camera position relative to screen origin
    double eye_distance_mm = 500.0;
    double pixel_pitch_mm = 0.2;  // for px <-> mm conversion of external data
};

double deg2rad(double deg);
double rad2deg(double rad);

/// g = (-cos(pitch) sin(yaw), -sin(pitch), -cos(pitch) cos(yaw)).
GazeVector angles_to_vector(const GazeAngles& a);

/// Inverse of angles_to_vector; the input is normalized first. Throws on a
/// zero-length vector.
GazeAngles vector_to_angles(const GazeVector& v);

/// Angle between two unit vectors, in degrees. The dot product is clamped
/// to [-1, 1].
double angular_error_deg(const GazeVector& a, const GazeVector& b);

/// Intersect the gaze ray (eye at distance `eye_distance_mm` in front of the
/// camera) with the screen plane. Throws when the ray is parallel to the
/// plane or does not point toward it.
Vec2 project_to_screen(const GazeAngles& a, const ScreenGeometry& geom);

/// Componentwise clamp onto the interval.
GazeAngles clamp_to_interval(const GazeAngles& a, const GazeInterval& interval);

}  // namespace gazeforge
