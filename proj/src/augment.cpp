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

#include "gazeforge/augment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "gazeforge/png_io.hpp"
#include "json.hpp"

namespace gazeforge {

namespace fs = std::filesystem;
using nlohmann::json;

void AugmentProtocol::validate() const {
    const double probs[] = {p_color_jitter, p_background, p_illumination, p_sensor_noise,
                            p_glasses,      p_mask,       p_blur,         p_desaturation,
                            mask_solid_prob};
    for (double p : probs)
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("AugmentProtocol: probabilities must be in [0,1]");
    if (views_per_sample < 1)
        throw std::invalid_argument("AugmentProtocol: views_per_sample must be >= 1");
    if (noise_alpha_y < 0 || noise_alpha_c < 0)
        throw std::invalid_argument("AugmentProtocol: noise strengths must be nonnegative");
}

// ---------------------------------------------------------------------------
// Sensor noise (YCrCb, strengths on the 0..255 scale)
// ---------------------------------------------------------------------------

namespace {

// Blur a zero-mean field, then rescale it back to unit sample std.
void normalize_blurred_field(std::vector<float>& field, int w, int h, double sigma) {
    gaussian_blur_plane(field, w, h, sigma);
    double mean = 0.0;
    for (float v : field) mean += v;
    mean /= field.size();
    double var = 0.0;
    for (float v : field) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / field.size());
    if (sd < 1e-8) return;
    for (float& v : field) v = static_cast<float>(v / sd);
}

}  // namespace

ImageBuffer sensor_noise(const ImageBuffer& img, double alpha_y, double alpha_c, double blotch_size,
                         Rng& rng) {
    if (img.channels != 3) throw std::invalid_argument("sensor_noise: 3-channel input required");
    if (alpha_y < 0 || alpha_c < 0)
        throw std::invalid_argument("sensor_noise: strengths must be nonnegative");
    if (blotch_size < 0) throw std::invalid_argument("sensor_noise: blotch size must be >= 0");
    if (alpha_y == 0.0 && alpha_c == 0.0) return img;

    ImageBuffer ycc = rgb_to_ycrcb(img);
    const size_t n = img.pixel_count();

    if (alpha_y > 0.0) {
        const float s = static_cast<float>(alpha_y / 255.0);
        for (size_t i = 0; i < n; ++i)
            ycc.data[3 * i] += s * static_cast<float>(rng.normal());
    }
    if (alpha_c > 0.0) {
        const float s = static_cast<float>(alpha_c / 255.0);
        for (int chroma = 1; chroma <= 2; ++chroma) {
            std::vector<float> field(n);
            for (float& v : field) v = static_cast<float>(rng.normal());
            normalize_blurred_field(field, img.width, img.height, blotch_size);
            for (size_t i = 0; i < n; ++i) ycc.data[3 * i + chroma] += s * field[i];
        }
    }
    ycc.clamp01();
    return ycrcb_to_rgb(ycc);
}

// ---------------------------------------------------------------------------
// Illumination gradient
// ---------------------------------------------------------------------------

ImageBuffer illumination(const ImageBuffer& img, double direction_deg, double opacity,
                         const std::array<float, 3>& tint) {
    if (opacity < 0.0 || opacity > 1.0)
        throw std::invalid_argument("illumination: opacity must be in [0,1]");
    if (opacity == 0.0) return img;
    const double rad = deg2rad(direction_deg);
    const double cx = std::cos(rad), cy = std::sin(rad);
    // Projection range of the unit square onto the direction.
    const double tmin = std::min(0.0, cx) + std::min(0.0, cy);
    const double tmax = std::max(0.0, cx) + std::max(0.0, cy);
    const double span = std::max(tmax - tmin, 1e-12);

    ImageBuffer out(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y) {
        const double ny = img.height > 1 ? static_cast<double>(y) / (img.height - 1) : 0.0;
        for (int x = 0; x < img.width; ++x) {
            const double nx = img.width > 1 ? static_cast<double>(x) / (img.width - 1) : 0.0;
            const double g = (nx * cx + ny * cy - tmin) / span;
            const float w = static_cast<float>(opacity * g);
            for (int c = 0; c < img.channels; ++c) {
                const float t = img.channels == 3 ? tint[c] : tint[0];
                const float v = img.at(x, y, c) * (1.0f - w) + t * w;
                out.at(x, y, c) = std::min(1.0f, std::max(0.0f, v));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Background replacement
// ---------------------------------------------------------------------------

ImageBuffer background_replace(const ImageBuffer& img, const ImageBuffer& matte,
                               const ImageBuffer& background) {
    if (matte.channels != 1 || matte.width != img.width || matte.height != img.height ||
        !background.same_shape(img))
        throw std::invalid_argument("background_replace: dimension mismatch");
    ImageBuffer out(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const float a = matte.at(x, y);
            for (int c = 0; c < img.channels; ++c)
                out.at(x, y, c) = a * img.at(x, y, c) + (1.0f - a) * background.at(x, y, c);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Glasses synthesis
// ---------------------------------------------------------------------------

TemplateChoice pick_glasses_template(const std::vector<GlassesTemplate>& library,
                                     double head_pitch, double head_yaw, Rng& rng) {
    if (library.empty()) throw std::invalid_argument("glasses: empty template library");
    const bool mirrored = head_yaw < 0.0;
    const double query_yaw = std::abs(head_yaw);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> ties;
    for (size_t i = 0; i < library.size(); ++i) {
        const double dp = library[i].pose_pitch - head_pitch;
        const double dy = library[i].pose_yaw - query_yaw;
        const double d = dp * dp + dy * dy;
        if (d < best - 1e-9) {
            best = d;
            ties.assign(1, static_cast<int>(i));
        } else if (d <= best + 1e-9) {
            ties.push_back(static_cast<int>(i));
        }
    }
    return {ties[rng.bounded(ties.size())], mirrored};
}

namespace {

GlassesTemplate mirror_template(const GlassesTemplate& t) {
    GlassesTemplate m;
    m.pose_pitch = t.pose_pitch;
    m.pose_yaw = -t.pose_yaw;
    const int w = t.overlay.width, h = t.overlay.height;
    m.overlay = ImageBuffer(w, h, 3);
    m.alpha = ImageBuffer(w, h, 1);
    m.lens = BinaryMask(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int mx = w - 1 - x;
            for (int c = 0; c < 3; ++c) m.overlay.at(mx, y, c) = t.overlay.at(x, y, c);
            m.alpha.at(mx, y) = t.alpha.at(x, y);
            m.lens.set(mx, y, t.lens.at(x, y));
        }
    // Mirroring swaps the left/right anchor roles within each vertical pair.
    auto flip_pt = [w](const Vec2& p) { return Vec2{w - 1.0 - p.x, p.y}; };
    m.anchors[0] = flip_pt(t.anchors[1]);
    m.anchors[1] = flip_pt(t.anchors[0]);
    m.anchors[2] = flip_pt(t.anchors[3]);
    m.anchors[3] = flip_pt(t.anchors[2]);
    return m;
}

SimilarityTransform rescale_about(const SimilarityTransform& t, double extra_scale,
                                  const Vec2& src_pivot) {
    SimilarityTransform out = t;
    out.scale = t.scale * extra_scale;
    const Vec2 fixed = t.apply(src_pivot);
    const double c = std::cos(out.rotation), s = std::sin(out.rotation);
    out.translation = {fixed.x - out.scale * (c * src_pivot.x - s * src_pivot.y),
                       fixed.y - out.scale * (s * src_pivot.x + c * src_pivot.y)};
    return out;
}

}  // namespace

ImageBuffer glasses_synthesis(const ImageBuffer& img, const LandmarkSet& landmarks,
                              double head_pitch, double head_yaw,
                              const std::vector<GlassesTemplate>& library,
                              const std::vector<int>& anchor_ids,
                              const std::vector<ImageBuffer>& reflection_textures,
                              const AugmentProtocol& protocol, Rng& rng) {
    if (img.channels != 3)
        throw std::invalid_argument("glasses: 3-channel face image required");
    if (anchor_ids.size() != 4)
        throw std::invalid_argument("glasses: exactly 4 anchor landmark ids required");
    std::vector<Vec2> face_anchors;
    for (int id : anchor_ids) {
        if (!landmarks.has(id))
            throw std::invalid_argument("glasses: missing anchor landmark " + std::to_string(id));
        face_anchors.push_back(landmarks.at(id));
    }

    const TemplateChoice choice = pick_glasses_template(library, head_pitch, head_yaw, rng);
    GlassesTemplate tpl = library[choice.index];
    if (choice.mirrored) tpl = mirror_template(tpl);

    const std::vector<Vec2> src_anchors(tpl.anchors.begin(), tpl.anchors.end());
    SimilarityTransform t = fit_rigid(src_anchors, face_anchors);

    const double extra_scale = rng.uniform(protocol.glasses_scale_min, protocol.glasses_scale_max);
    Vec2 pivot{0, 0};
    for (const Vec2& p : src_anchors) pivot = pivot + p;
    pivot = pivot * 0.25;
    t = rescale_about(t, extra_scale, pivot);

    // Frame color and opacity randomization.
    const float cs = static_cast<float>(rng.uniform(0.0, protocol.frame_color_strength_max));
    const std::array<float, 3> frame_color = {static_cast<float>(rng.uniform()),
                                              static_cast<float>(rng.uniform()),
                                              static_cast<float>(rng.uniform())};
    const float opacity =
        static_cast<float>(rng.uniform(protocol.glasses_opacity_min, protocol.glasses_opacity_max));
    const float refl_op = static_cast<float>(
        rng.uniform(protocol.reflection_opacity_min, protocol.reflection_opacity_max));

    ImageBuffer warped_rgb, warped_alpha;
    warp_similarity(tpl.overlay, tpl.alpha, t, img.width, img.height, warped_rgb, warped_alpha);
    ImageBuffer lens_rgb, lens_alpha;
    warp_similarity(mask_to_image(tpl.lens), mask_to_image(tpl.lens), t, img.width, img.height,
                    lens_rgb, lens_alpha);

    ImageBuffer reflection;
    std::array<float, 3> reflection_color{};
    const bool have_texture = !reflection_textures.empty() && refl_op > 0.0f;
    if (have_texture) {
        const ImageBuffer& tex = reflection_textures[rng.bounded(reflection_textures.size())];
        reflection = resize_bilinear(tex, img.width, img.height);
    } else if (refl_op > 0.0f) {
        reflection_color = {static_cast<float>(rng.uniform()), static_cast<float>(rng.uniform()),
                            static_cast<float>(rng.uniform())};
    }

    ImageBuffer out = img;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (refl_op > 0.0f) {
                const float la = lens_alpha.at(x, y) * refl_op;
                if (la > 0.0f)
                    for (int c = 0; c < 3; ++c) {
                        const float tex = have_texture
                                              ? reflection.at(x, y, c % reflection.channels)
                                              : reflection_color[c];
                        out.at(x, y, c) = out.at(x, y, c) * (1.0f - la) + tex * la;
                    }
            }
            const float a = warped_alpha.at(x, y) * opacity;
            if (a > 0.0f)
                for (int c = 0; c < 3; ++c) {
                    const float frame =
                        warped_rgb.at(x, y, c) * (1.0f - cs) + frame_color[c] * cs;
                    out.at(x, y, c) = out.at(x, y, c) * (1.0f - a) + frame * a;
                }
        }
    }
    out.clamp01();
    return out;
}

// ---------------------------------------------------------------------------
// Mask occlusion
// ---------------------------------------------------------------------------

ImageBuffer mask_synthesis(const ImageBuffer& img, const LandmarkSet& landmarks,
                           const std::vector<int>& polygon_ids, const MaskFill& fill,
                           BinaryMask* out_region) {
    if (polygon_ids.size() < 3)
        throw std::invalid_argument("mask_synthesis: need >= 3 polygon landmark ids");
    std::vector<Vec2> pts;
    for (int id : polygon_ids) {
        if (!landmarks.has(id))
            throw std::invalid_argument("mask_synthesis: missing landmark " + std::to_string(id));
        pts.push_back(landmarks.at(id));
    }
    if (!fill.solid && fill.texture == nullptr)
        throw std::invalid_argument("mask_synthesis: texture fill without texture");

    bool degenerate = false;
    const BinaryMask region = fill_polygon(pts, /*smooth=*/true, img.width, img.height, &degenerate);
    if (degenerate) throw std::invalid_argument("mask_synthesis: degenerate polygon");
    if (out_region) *out_region = region;

    ImageBuffer out = img;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (!region.at(x, y)) continue;
            for (int c = 0; c < img.channels; ++c) {
                float v;
                if (fill.solid) {
                    v = img.channels == 3 ? fill.color[c] : fill.color[0];
                } else {
                    const ImageBuffer& tex = *fill.texture;
                    const int tx = x % tex.width, ty = y % tex.height;
                    v = tex.at(tx, ty, c % tex.channels);
                }
                out.at(x, y, c) = std::min(1.0f, std::max(0.0f, v));
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Flip
// ---------------------------------------------------------------------------

FlippedSample flip_horizontal(const ImageBuffer& img, const LandmarkSet& landmarks,
                              const GazeAngles& gaze,
                              const std::vector<std::pair<int, int>>& swap_pairs) {
    FlippedSample out;
    out.image = ImageBuffer(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                out.image.at(img.width - 1 - x, y, c) = img.at(x, y, c);

    std::map<int, int> swap;
    for (const auto& [a, b] : swap_pairs) {
        swap[a] = b;
        swap[b] = a;
    }
    for (const auto& [id, p] : landmarks.points()) {
        const auto it = swap.find(id);
        const int target = it == swap.end() ? id : it->second;
        out.landmarks.set(target, {img.width - 1.0 - p.x, p.y});
    }
    out.gaze = {gaze.pitch, -gaze.yaw};
    return out;
}

// ---------------------------------------------------------------------------
// Color jitter / desaturation
// ---------------------------------------------------------------------------

ImageBuffer color_jitter(const ImageBuffer& img, const std::array<float, 3>& gains,
                         float brightness) {
    ImageBuffer out(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                const float g = img.channels == 3 ? gains[c] : gains[0];
                out.at(x, y, c) =
                    std::min(1.0f, std::max(0.0f, img.at(x, y, c) * g + brightness));
            }
    return out;
}

ImageBuffer desaturate(const ImageBuffer& img, float amount) {
    if (img.channels != 3) return img;
    ImageBuffer out(img.width, img.height, 3);
    const ImageBuffer y = luma(img);
    for (int yy = 0; yy < img.height; ++yy)
        for (int x = 0; x < img.width; ++x) {
            const float g = y.at(x, yy);
            for (int c = 0; c < 3; ++c) {
                const float v = img.at(x, yy, c);
                out.at(x, yy, c) = v + amount * (g - v);
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// View construction
// ---------------------------------------------------------------------------

std::vector<AugmentedView> build_views(const SampleInputs& sample, const AugmentProtocol& protocol,
                                       const AugmentAssets& assets, uint64_t seed, int epoch) {
    protocol.validate();
    std::vector<AugmentedView> views;
    views.reserve(protocol.views_per_sample);

    for (int v = 0; v < protocol.views_per_sample; ++v) {
        const uint64_t view_seed = mix64(seed, fnv1a(sample.sample_id),
                                         static_cast<uint64_t>(epoch), static_cast<uint64_t>(v));
        Rng rng(view_seed);

        AugmentedView view;
        view.view_index = v;
        view.seed = view_seed;

        // Flip is structural: forced on even view indices, never drawn.
        ImageBuffer image = sample.image;
        LandmarkSet landmarks = sample.landmarks;
        GazeAngles gaze = sample.gaze;
        double head_yaw = sample.head_yaw;
        std::optional<ImageBuffer> matte = sample.matte;
        if (v % 2 == 0) {
            FlippedSample flipped =
                flip_horizontal(image, landmarks, gaze, assets.flip_swap_pairs);
            image = std::move(flipped.image);
            landmarks = std::move(flipped.landmarks);
            gaze = flipped.gaze;
            head_yaw = -head_yaw;
            if (matte) {
                FlippedSample fm = flip_horizontal(*matte, LandmarkSet{}, {}, {});
                matte = std::move(fm.image);
            }
            view.flip_applied = true;
        }

        // Method draws, in the protocol listing order.
        const bool do_jitter = rng.bernoulli(protocol.p_color_jitter);
        const bool do_background = rng.bernoulli(protocol.p_background);
        const bool do_illum = rng.bernoulli(protocol.p_illumination);
        const bool do_noise = rng.bernoulli(protocol.p_sensor_noise);
        const bool do_glasses = rng.bernoulli(protocol.p_glasses);
        const bool do_mask = rng.bernoulli(protocol.p_mask);
        const bool do_blur = rng.bernoulli(protocol.p_blur);
        const bool do_desat = rng.bernoulli(protocol.p_desaturation);

        if (do_background && matte && !assets.backgrounds.empty()) {
            const ImageBuffer& bg = assets.backgrounds[rng.bounded(assets.backgrounds.size())];
            image = background_replace(
                image, *matte,
                bg.same_shape(image) ? bg : resize_bilinear(bg, image.width, image.height));
        }
        // Landmark-driven methods are skipped for samples that carry no
        // landmarks; partial landmark sets still raise inside the ops.
        const bool have_landmarks = landmarks.size() > 0;
        if (do_glasses && have_landmarks && !assets.glasses.empty() &&
            assets.glasses_anchor_ids.size() == 4) {
            image = glasses_synthesis(image, landmarks, sample.head_pitch, head_yaw,
                                      assets.glasses, assets.glasses_anchor_ids, assets.textures,
                                      protocol, rng);
            view.glasses_flag = true;
        }
        if (do_mask && have_landmarks && !assets.mask_polygon_ids.empty()) {
            MaskFill fill;
            fill.solid = assets.textures.empty() || rng.bernoulli(protocol.mask_solid_prob);
            if (fill.solid) {
                fill.color = {static_cast<float>(rng.uniform()), static_cast<float>(rng.uniform()),
                              static_cast<float>(rng.uniform())};
            } else {
                fill.texture = &assets.textures[rng.bounded(assets.textures.size())];
            }
            image = mask_synthesis(image, landmarks, assets.mask_polygon_ids, fill);
            view.mask_flag = true;
        }
        if (do_jitter) {
            const std::array<float, 3> gains = {
                static_cast<float>(rng.uniform(protocol.jitter_gain_min, protocol.jitter_gain_max)),
                static_cast<float>(rng.uniform(protocol.jitter_gain_min, protocol.jitter_gain_max)),
                static_cast<float>(
                    rng.uniform(protocol.jitter_gain_min, protocol.jitter_gain_max))};
            const float b = static_cast<float>(
                rng.uniform(-protocol.jitter_brightness, protocol.jitter_brightness));
            image = color_jitter(image, gains, b);
        }
        if (do_illum) {
            const double dir = rng.uniform(0.0, 360.0);
            const double op = rng.uniform(protocol.illum_opacity_min, protocol.illum_opacity_max);
            const std::array<float, 3> tint = {static_cast<float>(rng.uniform(0.6, 1.0)),
                                               static_cast<float>(rng.uniform(0.6, 1.0)),
                                               static_cast<float>(rng.uniform(0.6, 1.0))};
            image = illumination(image, dir, op, tint);
        }
        if (do_desat) {
            image = desaturate(image,
                               static_cast<float>(rng.uniform(protocol.desat_min, protocol.desat_max)));
        }
        if (do_blur) {
            image = gaussian_blur(image,
                                  rng.uniform(protocol.blur_sigma_min, protocol.blur_sigma_max));
        }
        if (do_noise) {
            image = sensor_noise(image, protocol.noise_alpha_y, protocol.noise_alpha_c,
                                 protocol.noise_blotch, rng);
        }

        image.clamp01();
        view.image = std::move(image);
        view.gaze = gaze;
        views.push_back(std::move(view));
    }
    return views;
}

// ---------------------------------------------------------------------------
// Template library I/O
// ---------------------------------------------------------------------------

std::vector<GlassesTemplate> load_glasses_library(const std::string& dir) {
    std::vector<GlassesTemplate> out;
    std::vector<fs::path> metas;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json") metas.push_back(entry.path());
    std::sort(metas.begin(), metas.end());
    for (const fs::path& meta : metas) {
        std::ifstream is(meta);
        const json j = json::parse(is);
        GlassesTemplate t;
        read_png_rgba((meta.parent_path() / j.at("overlay").get<std::string>()).string(),
                      t.overlay, t.alpha);
        t.lens =
            read_mask_png((meta.parent_path() / j.at("lens_mask").get<std::string>()).string());
        t.pose_pitch = j.at("pose").at("pitch").get<double>();
        t.pose_yaw = j.at("pose").at("yaw").get<double>();
        const auto& anchors = j.at("anchors");
        if (anchors.size() != 4) throw std::runtime_error("template needs 4 anchors: " + meta.string());
        for (int i = 0; i < 4; ++i)
            t.anchors[i] = {anchors[i][0].get<double>(), anchors[i][1].get<double>()};
        out.push_back(std::move(t));
    }
    return out;
}

void save_glasses_template(const std::string& dir, const std::string& name,
                           const GlassesTemplate& tpl) {
    fs::create_directories(dir);
    const fs::path base = fs::path(dir) / name;
    write_png_rgba(base.string() + "_overlay.png", tpl.overlay, tpl.alpha);
    write_mask_png(base.string() + "_lens.png", tpl.lens);
    json j;
    j["overlay"] = name + "_overlay.png";
    j["lens_mask"] = name + "_lens.png";
    j["pose"] = {{"pitch", tpl.pose_pitch}, {"yaw", tpl.pose_yaw}};
    j["anchors"] = json::array();
    for (const Vec2& a : tpl.anchors) j["anchors"].push_back({a.x, a.y});
    std::ofstream os(base.string() + ".json");
    os << j.dump(2) << "\n";
}

}  // namespace gazeforge
