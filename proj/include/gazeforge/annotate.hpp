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

#include <vector>

#include "gazeforge/imgproc.hpp"

namespace gazeforge {

enum class EyeSide { Left, Right };

/// Eye patch cut out of the face image and resampled to a reference width.
/// `scale` converts crop pixels back to face pixels (face = crop / scale).
struct EyeCrop {
    ImageBuffer image;
    int origin_x = 0;
    int origin_y = 0;
    int src_width = 0;
    int src_height = 0;
    double scale = 1.0;
    EyeSide side = EyeSide::Left;
};

/// Four binary masks in face-image coordinates with per-mask validity.
/// Invalid masks are excluded from Dice supervision downstream.
struct SegLabel {
    BinaryMask eye_left, eye_right, iris_left, iris_right;
    bool eye_left_valid = false, eye_right_valid = false;
    bool iris_left_valid = false, iris_right_valid = false;
};

struct AnnotateConfig {
    std::vector<int> eye_region_ids_left, eye_region_ids_right;  // eyelid polygon (outer)
    std::vector<int> inner_eye_ids_left, inner_eye_ids_right;    // eye contour (inner)
    int ref_width = 128;        // crop width all pixel constants are calibrated to
    double crop_margin = 0.4;   // bounding-box expansion per side
    double iou_threshold = 0.2;

    static AnnotateConfig defaults();
};

/// Smoothed polygon over the configured eyelid landmarks. Missing landmarks
/// or a degenerate polygon set *valid to false.
BinaryMask eye_region_mask(const LandmarkSet& landmarks, const std::vector<int>& ids, int width,
                           int height, bool* valid);

/// Cut the eye crop around the inner-eye landmarks, expanded by crop_margin
/// per side and resampled so the crop width equals ref_width.
EyeCrop make_eye_crop(const ImageBuffer& face, const LandmarkSet& landmarks,
                      const std::vector<int>& inner_ids, EyeSide side, int ref_width,
                      double crop_margin);

/// Dark-iris extraction inside the inner-eye mask: blur, brighten-outside,
/// median threshold, open/close, largest component, final rounding blur.
/// Pixel-unit constants scale with k = crop_width / ref_width. An empty
/// post-morphology result clears *valid; an empty input mask throws.
BinaryMask iris_mask(const EyeCrop& crop, const BinaryMask& inner_eye_mask, int ref_width,
                     bool* valid);

/// |a n b| / |a u b|; 0 when the union is empty.
double iou(const BinaryMask& a, const BinaryMask& b);

/// Per side: when any mask is invalid or iou(eye, iris) falls below the
/// threshold, both of that side's masks are flagged invalid.
SegLabel filter_labels(SegLabel label, double threshold = 0.2);

/// Full per-sample annotation: eye-region masks, eye crops, iris extraction,
/// paste-back, and the IoU reliability filter.
SegLabel annotate_sample(const ImageBuffer& face, const LandmarkSet& landmarks,
                         const AnnotateConfig& config);

}  // namespace gazeforge
