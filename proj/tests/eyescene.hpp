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

#include <cmath>
#include <vector>

#include "gazeforge/annotate.hpp"
#include "gazeforge/rng.hpp"

namespace gftest {

/// Parameterized synthetic eye scene: a bright sclera ellipse (the eye
/// opening) set in skin, with a darker iris disk centered in it. The iris
/// extends above and below the opening as a real iris does under the
/// eyelids; the ground truth is the full disk.
struct EyeScene {
    gazeforge::ImageBuffer face;
    gazeforge::LandmarkSet landmarks;
    gazeforge::BinaryMask gt_iris_left, gt_iris_right;
    double contrast = 0.0;
};

struct EyeSceneParams {
    int width = 192;
    int height = 120;
    double min_contrast = 0.3;
};

inline EyeScene make_eye_scene(gazeforge::Rng& rng, const gazeforge::AnnotateConfig& config,
                               const EyeSceneParams& params = {}) {
    using namespace gazeforge;
    EyeScene scene;
    const int w = params.width, h = params.height;
    scene.face = ImageBuffer(w, h, 3);
    scene.contrast = rng.uniform(params.min_contrast, 0.6);

    const double skin = rng.uniform(0.55, 0.78);
    const double sclera = rng.uniform(0.78, 0.92);
    const double iris = sclera - scene.contrast;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            scene.face.at(x, y, 0) = static_cast<float>(std::min(1.0, skin + 0.04));
            scene.face.at(x, y, 1) = static_cast<float>(skin);
            scene.face.at(x, y, 2) = static_cast<float>(std::max(0.0, skin - 0.04));
        }

    scene.gt_iris_left = BinaryMask(w, h);
    scene.gt_iris_right = BinaryMask(w, h);

    const double cy = h / 2.0 + rng.uniform(-4.0, 4.0);
    const double ea = rng.uniform(26.0, 36.0);  // opening semi-width
    const double eb = rng.uniform(12.0, 15.0);  // opening semi-height
    // Lid occlusion proportional to the eye size, as in real faces where the
    // iris-to-fissure ratio is roughly constant.
    const double iris_r = eb + ea / 5.0 + rng.uniform(-1.0, 1.0);
    const double pupil_r = 0.35 * iris_r;

    auto paint_eye = [&](double cx, BinaryMask& gt, const std::vector<int>& inner_ids,
                         const std::vector<int>& region_ids) {
        const double icx = cx + rng.uniform(-3.0, 3.0);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double ex = (x - cx) / ea, ey = (y - cy) / eb;
                const bool in_opening = ex * ex + ey * ey <= 1.0;
                const double dx = x - icx, dy = y - cy;
                const double r2 = dx * dx + dy * dy;
                if (r2 <= iris_r * iris_r) gt.set(x, y, true);
                if (!in_opening) continue;
                double v = sclera;
                if (r2 <= pupil_r * pupil_r)
                    v = std::max(0.02, iris - 0.1);
                else if (r2 <= iris_r * iris_r)
                    v = iris;
                for (int c = 0; c < 3; ++c) scene.face.at(x, y, c) = static_cast<float>(v);
            }
        // Inner landmarks on the opening contour, outer ones on the eyelid area.
        const size_t n_inner = inner_ids.size();
        for (size_t i = 0; i < n_inner; ++i) {
            const double a = 2.0 * M_PI * static_cast<double>(i) / n_inner;
            scene.landmarks.set(inner_ids[i], {cx + ea * std::cos(a), cy + eb * std::sin(a)});
        }
        const size_t n_outer = region_ids.size();
        for (size_t i = 0; i < n_outer; ++i) {
            const double a = 2.0 * M_PI * static_cast<double>(i) / n_outer;
            scene.landmarks.set(region_ids[i],
                                {cx + (ea + 9.0) * std::cos(a), cy + (eb + 9.0) * std::sin(a)});
        }
    };

    paint_eye(w * 0.28, scene.gt_iris_right, config.inner_eye_ids_right,
              config.eye_region_ids_right);
    paint_eye(w * 0.72, scene.gt_iris_left, config.inner_eye_ids_left,
              config.eye_region_ids_left);

    // Sensor-style pixel noise.
    for (float& v : scene.face.data)
        v = std::min(1.0f, std::max(0.0f, v + static_cast<float>(0.01 * rng.normal())));
    return scene;
}

}  // namespace gftest
