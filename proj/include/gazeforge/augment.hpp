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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gazeforge/geometry.hpp"
#include "gazeforge/imgproc.hpp"
#include "gazeforge/rng.hpp"

namespace gazeforge {

/// Stochastic mixing protocol: per-method application probabilities and the
/// parameter ranges of each method.
struct AugmentProtocol {
    double p_color_jitter = 1.0;
    double p_background = 0.95;
    double p_illumination = 0.5;
    double p_sensor_noise = 0.5;
    double p_glasses = 0.5;
    double p_mask = 0.5;
    double p_blur = 0.25;
    double p_desaturation = 0.1;
    int views_per_sample = 4;

    // color jitter: per-channel gain plus brightness offset
    double jitter_gain_min = 0.8;
    double jitter_gain_max = 1.2;
    double jitter_brightness = 0.1;

    // sensor noise strengths on the 0..255 scale
    double noise_alpha_y = 11.0;
    double noise_alpha_c = 15.0;
    double noise_blotch = 2.0;

    // illumination gradient
    double illum_opacity_min = 0.15;
    double illum_opacity_max = 0.5;

    // glasses synthesis
    double glasses_scale_min = 0.9;
    double glasses_scale_max = 1.1;
    double glasses_opacity_min = 0.6;
    double glasses_opacity_max = 1.0;
    double reflection_opacity_min = 0.0;
    double reflection_opacity_max = 0.35;
    double frame_color_strength_max = 0.8;

    // mask occlusion
    double mask_solid_prob = 0.5;

    // blur / desaturation
    double blur_sigma_min = 0.5;
    double blur_sigma_max = 1.5;
    double desat_min = 0.5;
    double desat_max = 1.0;

    void validate() const;
};

/// Pose-indexed eyeglasses overlay. Anchors are ordered (upper-right,
/// upper-left, lower-right, lower-left) in subject image coordinates and
/// correspond one-to-one with the configured face anchor landmark ids.
struct GlassesTemplate {
    ImageBuffer overlay;  // RGB
    ImageBuffer alpha;    // 1 channel
    BinaryMask lens;
    std::array<Vec2, 4> anchors;
    double pose_pitch = 0.0;
    double pose_yaw = 0.0;
};

struct AugmentedView {
    ImageBuffer image;
    GazeAngles gaze;
    bool glasses_flag = false;
    bool mask_flag = false;
    bool flip_applied = false;
    int view_index = 0;
    uint64_t seed = 0;  // per-view derived seed, for replay
};

// ---------------------------------------------------------------------------
// Individual augmentations
// ---------------------------------------------------------------------------

/// Sensor noise in YCrCb: Gaussian luma noise plus blurred, re-normalized
/// chroma blotches. Strengths are on the 0..255 scale. Zero strengths return
/// the input bit-identically.
ImageBuffer sensor_noise(const ImageBuffer& img, double alpha_y, double alpha_c, double blotch_size,
                         Rng& rng);

/// Linear gradient overlay: out = img*(1 - opacity*g) + opacity*g*tint where
/// g ramps 0 -> 1 along `direction_deg` across the image.
ImageBuffer illumination(const ImageBuffer& img, double direction_deg, double opacity,
                         const std::array<float, 3>& tint);

/// out = matte*img + (1-matte)*background, per pixel.
ImageBuffer background_replace(const ImageBuffer& img, const ImageBuffer& matte,
                               const ImageBuffer& background);

/// Nearest-pose template choice: Euclidean distance in (pitch, yaw) with the
/// template mirrored when the sample yaw is negative. Pose ties are resolved
/// by a uniform draw (covers multiple frame styles per pose node).
struct TemplateChoice {
    int index = -1;
    bool mirrored = false;
};
TemplateChoice pick_glasses_template(const std::vector<GlassesTemplate>& library,
                                     double head_pitch, double head_yaw, Rng& rng);

/// Fit the chosen template onto the face anchors and composite it, with
/// randomized scale, frame color, opacity, and lens reflections drawn from
/// the protocol ranges.
ImageBuffer glasses_synthesis(const ImageBuffer& img, const LandmarkSet& landmarks,
                              double head_pitch, double head_yaw,
                              const std::vector<GlassesTemplate>& library,
                              const std::vector<int>& anchor_ids,
                              const std::vector<ImageBuffer>& reflection_textures,
                              const AugmentProtocol& protocol, Rng& rng);

struct MaskFill {
    bool solid = true;
    std::array<float, 3> color{0.5f, 0.5f, 0.5f};
    const ImageBuffer* texture = nullptr;  // tiled when solid == false
};

/// Fill the spline-smoothed lower-face polygon over the configured landmark
/// ids with a solid color or tiled texture.
ImageBuffer mask_synthesis(const ImageBuffer& img, const LandmarkSet& landmarks,
                           const std::vector<int>& polygon_ids, const MaskFill& fill,
                           BinaryMask* out_region = nullptr);

struct FlippedSample {
    ImageBuffer image;
    LandmarkSet landmarks;
    GazeAngles gaze;
};

/// Horizontal mirror: pixels and landmark x map to width-1-x, left/right
/// landmark ids swap, yaw negates, pitch is untouched.
FlippedSample flip_horizontal(const ImageBuffer& img, const LandmarkSet& landmarks,
                              const GazeAngles& gaze,
                              const std::vector<std::pair<int, int>>& swap_pairs);

ImageBuffer color_jitter(const ImageBuffer& img, const std::array<float, 3>& gains,
                         float brightness);

ImageBuffer desaturate(const ImageBuffer& img, float amount);

// ---------------------------------------------------------------------------
// View construction
// ---------------------------------------------------------------------------

struct SampleInputs {
    std::string sample_id;
    ImageBuffer image;
    LandmarkSet landmarks;
    GazeAngles gaze;
    double head_pitch = 0.0;
    double head_yaw = 0.0;
    std::optional<ImageBuffer> matte;  // 1-channel soft foreground matte
};

struct AugmentAssets {
    std::vector<GlassesTemplate> glasses;
    std::vector<ImageBuffer> backgrounds;
    std::vector<ImageBuffer> textures;  // lens reflections and mask fills
    std::vector<int> glasses_anchor_ids;
    std::vector<int> mask_polygon_ids;
    std::vector<std::pair<int, int>> flip_swap_pairs;
};

/// n views with independent Bernoulli method draws; horizontal flip is forced
/// on even (0-based) view indices and never drawn stochastically. The view
/// seed is mix(seed, sample_id, epoch, view_index), so outputs do not depend
/// on worker scheduling.
std::vector<AugmentedView> build_views(const SampleInputs& sample, const AugmentProtocol& protocol,
                                       const AugmentAssets& assets, uint64_t seed, int epoch);

// ---------------------------------------------------------------------------
// Template library I/O
// ---------------------------------------------------------------------------

/// Directory layout: one JSON per template referencing an RGBA overlay PNG
/// and a lens-mask PNG, with pose and the 4 anchor coordinates.
std::vector<GlassesTemplate> load_glasses_library(const std::string& dir);
void save_glasses_template(const std::string& dir, const std::string& name,
                           const GlassesTemplate& tpl);

}  // namespace gazeforge
