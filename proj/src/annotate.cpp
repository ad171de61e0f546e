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

#include "gazeforge/annotate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gazeforge {

AnnotateConfig AnnotateConfig::defaults() {
    AnnotateConfig c;
    // MediaPipe face-mesh indices. Editable; the subject's right eye appears
    // on the image left.
    c.inner_eye_ids_right = {33, 7, 163, 144, 145, 153, 154, 155, 133, 173, 157, 158, 159, 160,
                             161, 246};
    c.inner_eye_ids_left = {263, 249, 390, 373, 374, 380, 381, 382, 362, 398, 384, 385, 386, 387,
                            388, 466};
    c.eye_region_ids_right = {70, 63, 105, 66, 107, 55, 193, 245, 128, 121, 120, 119, 118, 117,
                              111, 143};
    c.eye_region_ids_left = {300, 293, 334, 296, 336, 285, 417, 465, 357, 350, 349, 348, 347, 346,
                             340, 372};
    return c;
}

BinaryMask eye_region_mask(const LandmarkSet& landmarks, const std::vector<int>& ids, int width,
                           int height, bool* valid) {
    if (valid) *valid = false;
    if (ids.size() < 3) return BinaryMask(width, height);
    std::vector<Vec2> pts;
    for (int id : ids) {
        if (!landmarks.has(id)) return BinaryMask(width, height);
        pts.push_back(landmarks.at(id));
    }
    bool degenerate = false;
    BinaryMask mask = fill_polygon(pts, /*smooth=*/true, width, height, &degenerate);
    if (degenerate || mask.empty_mask()) return BinaryMask(width, height);
    if (valid) *valid = true;
    return mask;
}

EyeCrop make_eye_crop(const ImageBuffer& face, const LandmarkSet& landmarks,
                      const std::vector<int>& inner_ids, EyeSide side, int ref_width,
                      double crop_margin) {
    double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;
    for (int id : inner_ids) {
        if (!landmarks.has(id))
            throw std::invalid_argument("make_eye_crop: missing landmark " + std::to_string(id));
        const Vec2& p = landmarks.at(id);
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double mx = (xmax - xmin) * crop_margin;
    const double my = (ymax - ymin) * crop_margin;
    int x0 = std::max(0, static_cast<int>(std::floor(xmin - mx)));
    int y0 = std::max(0, static_cast<int>(std::floor(ymin - my)));
    int x1 = std::min(face.width, static_cast<int>(std::ceil(xmax + mx)) + 1);
    int y1 = std::min(face.height, static_cast<int>(std::ceil(ymax + my)) + 1);
    if (x1 - x0 < 2 || y1 - y0 < 2) throw std::invalid_argument("make_eye_crop: crop too small");

    ImageBuffer patch(x1 - x0, y1 - y0, face.channels);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            for (int c = 0; c < face.channels; ++c)
                patch.at(x - x0, y - y0, c) = face.at(x, y, c);

    EyeCrop crop;
    crop.origin_x = x0;
    crop.origin_y = y0;
    crop.src_width = x1 - x0;
    crop.src_height = y1 - y0;
    crop.side = side;
    crop.scale = static_cast<double>(ref_width) / crop.src_width;
    const int new_h = std::max(2, static_cast<int>(std::lround(crop.src_height * crop.scale)));
    crop.image = resize_bilinear(patch, ref_width, new_h);
    return crop;
}

namespace {

int scaled_diameter(double base, double k) {
    return std::max(1, static_cast<int>(std::lround(base * k)));
}

int mask_bbox_width(const BinaryMask& m) {
    int xmin = m.width, xmax = -1;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.at(x, y)) {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
            }
    return xmax < xmin ? 0 : xmax - xmin + 1;
}

}  // namespace

BinaryMask iris_mask(const EyeCrop& crop, const BinaryMask& inner_eye_mask, int ref_width,
                     bool* valid) {
    if (valid) *valid = false;
    if (!inner_eye_mask.same_shape(BinaryMask(crop.image.width, crop.image.height)))
        throw std::invalid_argument("iris_mask: mask does not match crop");
    if (inner_eye_mask.empty_mask()) throw std::invalid_argument("iris_mask: empty eye mask");

    const double k = static_cast<double>(crop.image.width) / ref_width;

    // Brightness, reflection removal.
    ImageBuffer y = luma(crop.image);
    y = gaussian_blur(y, 2.0 * k);

    // Brighten pixels near and outside the eye contour.
    const int dilate_d = std::max(1, mask_bbox_width(inner_eye_mask) / 6);
    const BinaryMask dilated = morph(inner_eye_mask, MorphOp::Dilate, dilate_d);
    std::vector<float> outside(y.data.size());
    for (size_t i = 0; i < outside.size(); ++i) outside[i] = dilated.data[i] ? 0.0f : 1.0f;
    gaussian_blur_plane(outside, y.width, y.height, 15.0 * k);
    for (size_t i = 0; i < y.data.size(); ++i)
        y.data[i] = std::min(1.0f, std::max(0.0f, y.data[i] + 0.5f * outside[i]));

    // Median brightness over the in-mask pixels.
    std::vector<float> in_mask;
    for (size_t i = 0; i < y.data.size(); ++i)
        if (inner_eye_mask.data[i]) in_mask.push_back(y.data[i]);
    const size_t mid = in_mask.size() / 2;
    std::nth_element(in_mask.begin(), in_mask.begin() + mid, in_mask.end());
    const float threshold = in_mask[mid];

    BinaryMask raw(y.width, y.height);
    for (size_t i = 0; i < y.data.size(); ++i) raw.data[i] = y.data[i] < threshold ? 1 : 0;

    BinaryMask m = morph(raw, MorphOp::Open, scaled_diameter(13.0, k));
    m = morph(m, MorphOp::Close, scaled_diameter(5.0, k));
    m = largest_component(m);
    if (m.empty_mask()) return m;

    // Round the shape: blur the binary mask and re-threshold.
    std::vector<float> soft(m.data.size());
    for (size_t i = 0; i < soft.size(); ++i) soft[i] = m.data[i] ? 1.0f : 0.0f;
    gaussian_blur_plane(soft, m.width, m.height, 15.0 * k);
    BinaryMask rounded(m.width, m.height);
    for (size_t i = 0; i < soft.size(); ++i) rounded.data[i] = soft[i] > 0.2f ? 1 : 0;
    rounded = largest_component(rounded);  // blur cannot split it, but keep the contract explicit

    if (rounded.empty_mask()) return rounded;
    if (valid) *valid = true;
    return rounded;
}

double iou(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("iou: dimension mismatch");
    size_t inter = 0, uni = 0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        const bool va = a.data[i], vb = b.data[i];
        inter += va && vb;
        uni += va || vb;
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

SegLabel filter_labels(SegLabel label, double threshold) {
    auto filter_side = [threshold](BinaryMask& eye, BinaryMask& iris, bool& eye_valid,
                                   bool& iris_valid) {
        if (!eye_valid || !iris_valid || iou(eye, iris) < threshold) {
            eye_valid = false;
            iris_valid = false;
        }
    };
    filter_side(label.eye_left, label.iris_left, label.eye_left_valid, label.iris_left_valid);
    filter_side(label.eye_right, label.iris_right, label.eye_right_valid, label.iris_right_valid);
    return label;
}

namespace {

// Inner-eye polygon rasterized in crop coordinates.
BinaryMask inner_mask_in_crop(const LandmarkSet& landmarks, const std::vector<int>& ids,
                              const EyeCrop& crop) {
    std::vector<Vec2> pts;
    for (int id : ids) {
        const Vec2& p = landmarks.at(id);
        pts.push_back({(p.x - crop.origin_x) * crop.scale, (p.y - crop.origin_y) * crop.scale});
    }
    bool degenerate = false;
    return fill_polygon(pts, /*smooth=*/true, crop.image.width, crop.image.height, &degenerate);
}

// Paste a crop-space mask back into face coordinates via bilinear upsampling
// of the soft mask, thresholded at 0.5.
BinaryMask paste_to_face(const BinaryMask& crop_mask, const EyeCrop& crop, int face_w,
                         int face_h) {
    ImageBuffer soft = mask_to_image(crop_mask);
    soft = resize_bilinear(soft, crop.src_width, crop.src_height);
    BinaryMask out(face_w, face_h);
    for (int y = 0; y < crop.src_height; ++y) {
        const int fy = crop.origin_y + y;
        if (fy < 0 || fy >= face_h) continue;
        for (int x = 0; x < crop.src_width; ++x) {
            const int fx = crop.origin_x + x;
            if (fx < 0 || fx >= face_w) continue;
            if (soft.at(x, y) > 0.5f) out.set(fx, fy, true);
        }
    }
    return out;
}

struct SideResult {
    BinaryMask eye, iris;
    bool eye_valid = false, iris_valid = false;
};

SideResult annotate_side(const ImageBuffer& face, const LandmarkSet& landmarks,
                         const std::vector<int>& region_ids, const std::vector<int>& inner_ids,
                         EyeSide side, const AnnotateConfig& config) {
    SideResult r;
    r.eye = eye_region_mask(landmarks, region_ids, face.width, face.height, &r.eye_valid);
    r.iris = BinaryMask(face.width, face.height);
    if (!r.eye_valid) return r;

    for (int id : inner_ids)
        if (!landmarks.has(id)) return r;

    EyeCrop crop;
    try {
        crop = make_eye_crop(face, landmarks, inner_ids, side, config.ref_width,
                             config.crop_margin);
    } catch (const std::invalid_argument&) {
        return r;
    }
    const BinaryMask inner = inner_mask_in_crop(landmarks, inner_ids, crop);
    if (inner.empty_mask()) return r;

    bool iris_valid = false;
    const BinaryMask iris_crop = iris_mask(crop, inner, config.ref_width, &iris_valid);
    if (!iris_valid) return r;

    BinaryMask iris_face = paste_to_face(iris_crop, crop, face.width, face.height);
    // Keep the iris within a small dilation of the eye-region mask, then
    // re-extract the largest component so both invariants hold.
    const int clip_d = std::max(3, static_cast<int>(std::lround(crop.src_width * 0.1)));
    const BinaryMask limit = morph(r.eye, MorphOp::Dilate, clip_d);
    for (size_t i = 0; i < iris_face.data.size(); ++i)
        iris_face.data[i] = iris_face.data[i] && limit.data[i] ? 1 : 0;
    iris_face = largest_component(iris_face);
    if (iris_face.empty_mask()) return r;

    r.iris = std::move(iris_face);
    r.iris_valid = true;
    return r;
}

}  // namespace

SegLabel annotate_sample(const ImageBuffer& face, const LandmarkSet& landmarks,
                         const AnnotateConfig& config) {
    SegLabel label;
    SideResult left = annotate_side(face, landmarks, config.eye_region_ids_left,
                                    config.inner_eye_ids_left, EyeSide::Left, config);
    SideResult right = annotate_side(face, landmarks, config.eye_region_ids_right,
                                     config.inner_eye_ids_right, EyeSide::Right, config);
    label.eye_left = std::move(left.eye);
    label.iris_left = std::move(left.iris);
    label.eye_left_valid = left.eye_valid;
    label.iris_left_valid = left.iris_valid;
    label.eye_right = std::move(right.eye);
    label.iris_right = std::move(right.iris);
    label.eye_right_valid = right.eye_valid;
    label.iris_right_valid = right.iris_valid;
    return filter_labels(label, config.iou_threshold);
}

}  // namespace gazeforge
