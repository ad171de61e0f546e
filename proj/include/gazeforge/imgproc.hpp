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

#include <span>
#include <vector>

#include "gazeforge/image.hpp"

namespace gazeforge {

// ---------------------------------------------------------------------------
// Color conversion (BT.601 full-range, chroma offset 0.5)
// ---------------------------------------------------------------------------

/// RGB -> YCrCb. Channel order of the result is (Y, Cr, Cb).
ImageBuffer rgb_to_ycrcb(const ImageBuffer& img);

/// YCrCb -> RGB. Output clamped to [0, 1].
ImageBuffer ycrcb_to_rgb(const ImageBuffer& img);

/// Luma plane of an RGB image (identity for single-channel input).
ImageBuffer luma(const ImageBuffer& img);

// ---------------------------------------------------------------------------
// Gaussian blur (separable, kernel truncated at +/-3 sigma, clamp-to-edge)
// ---------------------------------------------------------------------------

/// Blur a single contiguous plane in place. Values may be outside [0,1]
/// (noise fields); no clamping is performed.
void gaussian_blur_plane(std::vector<float>& plane, int width, int height, double sigma);

/// Per-channel blur of an image. sigma == 0 returns the input unchanged.
ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma);

// ---------------------------------------------------------------------------
// Set morphology with a rasterized disk element K(diameter)
// ---------------------------------------------------------------------------

enum class MorphOp { Dilate, Erode, Open, Close };

/// Offsets (dx, dy) of the disk element: |dx|,|dy| <= floor(d/2) and
/// dx^2 + dy^2 <= (d/2)^2. Exposed for oracle tests.
std::vector<std::pair<int, int>> disk_offsets(int diameter);

BinaryMask morph(const BinaryMask& mask, MorphOp op, int kernel_diameter);

/// Largest 8-connected true region; empty input yields an empty mask.
/// Ties are broken by the first region encountered in row-major order.
BinaryMask largest_component(const BinaryMask& mask);

// ---------------------------------------------------------------------------
// Polygon rasterization
// ---------------------------------------------------------------------------

/// Closed centripetal Catmull-Rom spline through the given control points,
/// sampled at `subdivisions` points per segment.
std::vector<Vec2> catmull_rom_closed(std::span<const Vec2> points, int subdivisions);

/// Even-odd scanline fill sampled at pixel centers. With smooth == true the
/// boundary is the closed Catmull-Rom spline through the points. A collinear
/// (zero-area) polygon yields an empty mask and sets *degenerate.
BinaryMask fill_polygon(std::span<const Vec2> points, bool smooth, int width, int height,
                        bool* degenerate = nullptr);

/// Signed shoelace area of a closed polygon.
double polygon_area(std::span<const Vec2> points);

// ---------------------------------------------------------------------------
// Rigid / similarity landmark fitting (2-D Procrustes)
// ---------------------------------------------------------------------------

struct SimilarityTransform {
    double rotation = 0.0;  // radians, counter-clockwise in image coordinates
    double scale = 1.0;
    Vec2 translation;
    double residual_rms = 0.0;

    Vec2 apply(const Vec2& p) const;
    SimilarityTransform inverse() const;
};

/// Least-squares similarity transform mapping src onto dst. Requires >= 2
/// points; coincident source points are rejected. with_scale == false fits a
/// pure rigid (rotation + translation) transform.
SimilarityTransform fit_rigid(std::span<const Vec2> src, std::span<const Vec2> dst,
                              bool with_scale = true);

// ---------------------------------------------------------------------------
// Resampling and compositing helpers
// ---------------------------------------------------------------------------

ImageBuffer resize_bilinear(const ImageBuffer& img, int new_width, int new_height);

/// Warp `src` (with per-pixel alpha plane) into a dst-sized frame under the
/// given src->dst transform, bilinear sampling, alpha zero outside src.
void warp_similarity(const ImageBuffer& src_rgb, const ImageBuffer& src_alpha,
                     const SimilarityTransform& t, int dst_width, int dst_height,
                     ImageBuffer& out_rgb, ImageBuffer& out_alpha);

ImageBuffer mask_to_image(const BinaryMask& mask);
BinaryMask image_to_mask(const ImageBuffer& img, float threshold);

}  // namespace gazeforge
