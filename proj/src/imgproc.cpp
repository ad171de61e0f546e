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

#include "gazeforge/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace gazeforge {

double Vec2::norm() const { return std::sqrt(x * x + y * y); }

ImageBuffer::ImageBuffer(int w, int h, int c, float fill)
    : width(w), height(h), channels(c), data(static_cast<size_t>(w) * h * c, fill) {
    if (w < 0 || h < 0 || (c != 1 && c != 3))
        throw std::invalid_argument("ImageBuffer: channels must be 1 or 3");
}

void ImageBuffer::clamp01() {
    for (float& v : data) v = std::min(1.0f, std::max(0.0f, v));
}

size_t BinaryMask::count() const {
    size_t n = 0;
    for (uint8_t v : data) n += v;
    return n;
}

// ---------------------------------------------------------------------------
// Color conversion
// ---------------------------------------------------------------------------

ImageBuffer rgb_to_ycrcb(const ImageBuffer& img) {
    if (img.channels != 3) throw std::invalid_argument("rgb_to_ycrcb: 3-channel input required");
    ImageBuffer out(img.width, img.height, 3);
    const size_t n = img.pixel_count();
    for (size_t i = 0; i < n; ++i) {
        const float r = img.data[3 * i + 0];
        const float g = img.data[3 * i + 1];
        const float b = img.data[3 * i + 2];
        const float y = 0.299f * r + 0.587f * g + 0.114f * b;
        out.data[3 * i + 0] = y;
        out.data[3 * i + 1] = (r - y) * (0.5f / 0.701f) + 0.5f;
        out.data[3 * i + 2] = (b - y) * (0.5f / 0.886f) + 0.5f;
    }
    return out;
}

ImageBuffer ycrcb_to_rgb(const ImageBuffer& img) {
    if (img.channels != 3) throw std::invalid_argument("ycrcb_to_rgb: 3-channel input required");
    ImageBuffer out(img.width, img.height, 3);
    const size_t n = img.pixel_count();
    for (size_t i = 0; i < n; ++i) {
        const float y = img.data[3 * i + 0];
        const float cr = img.data[3 * i + 1] - 0.5f;
        const float cb = img.data[3 * i + 2] - 0.5f;
        const float r = y + (0.701f / 0.5f) * cr;
        const float b = y + (0.886f / 0.5f) * cb;
        const float g = (y - 0.299f * r - 0.114f * b) / 0.587f;
        out.data[3 * i + 0] = std::min(1.0f, std::max(0.0f, r));
        out.data[3 * i + 1] = std::min(1.0f, std::max(0.0f, g));
        out.data[3 * i + 2] = std::min(1.0f, std::max(0.0f, b));
    }
    return out;
}

ImageBuffer luma(const ImageBuffer& img) {
    if (img.channels == 1) return img;
    ImageBuffer out(img.width, img.height, 1);
    const size_t n = img.pixel_count();
    for (size_t i = 0; i < n; ++i)
        out.data[i] = 0.299f * img.data[3 * i] + 0.587f * img.data[3 * i + 1] +
                      0.114f * img.data[3 * i + 2];
    return out;
}

// ---------------------------------------------------------------------------
// Gaussian blur
// ---------------------------------------------------------------------------

namespace {

std::vector<float> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<float> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
        k[i + radius] = static_cast<float>(v);
        sum += v;
    }
    for (float& v : k) v = static_cast<float>(v / sum);
    return k;
}

// 1-D convolution along x with clamp-to-edge padding.
void convolve_rows(const std::vector<float>& in, std::vector<float>& out, int w, int h,
                   const std::vector<float>& k) {
    const int radius = static_cast<int>(k.size() / 2);
    for (int y = 0; y < h; ++y) {
        const float* row = in.data() + static_cast<size_t>(y) * w;
        float* orow = out.data() + static_cast<size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (int i = -radius; i <= radius; ++i) {
                int xi = std::min(w - 1, std::max(0, x + i));
                acc += k[i + radius] * row[xi];
            }
            orow[x] = acc;
        }
    }
}

void convolve_cols(const std::vector<float>& in, std::vector<float>& out, int w, int h,
                   const std::vector<float>& k) {
    const int radius = static_cast<int>(k.size() / 2);
    for (int y = 0; y < h; ++y) {
        float* orow = out.data() + static_cast<size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (int i = -radius; i <= radius; ++i) {
                int yi = std::min(h - 1, std::max(0, y + i));
                acc += k[i + radius] * in[static_cast<size_t>(yi) * w + x];
            }
            orow[x] = acc;
        }
    }
}

}  // namespace

void gaussian_blur_plane(std::vector<float>& plane, int width, int height, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("gaussian_blur: sigma must be >= 0");
    if (sigma == 0.0 || width == 0 || height == 0) return;
    const std::vector<float> k = gaussian_kernel(sigma);
    std::vector<float> tmp(plane.size());
    convolve_rows(plane, tmp, width, height, k);
    convolve_cols(tmp, plane, width, height, k);
}

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("gaussian_blur: sigma must be >= 0");
    if (sigma == 0.0) return img;
    ImageBuffer out = img;
    std::vector<float> plane(img.pixel_count());
    for (int c = 0; c < img.channels; ++c) {
        for (size_t i = 0; i < plane.size(); ++i) plane[i] = img.data[i * img.channels + c];
        gaussian_blur_plane(plane, img.width, img.height, sigma);
        for (size_t i = 0; i < plane.size(); ++i) out.data[i * img.channels + c] = plane[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Morphology
// ---------------------------------------------------------------------------

std::vector<std::pair<int, int>> disk_offsets(int diameter) {
    if (diameter < 1) throw std::invalid_argument("morph: kernel diameter must be >= 1");
    const int r = diameter / 2;
    const double r2 = 0.25 * diameter * diameter;
    std::vector<std::pair<int, int>> offsets;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            if (dx * dx + dy * dy <= r2) offsets.emplace_back(dx, dy);
    return offsets;
}

namespace {

BinaryMask dilate_or_erode(const BinaryMask& mask, bool dilate,
                           const std::vector<std::pair<int, int>>& offsets) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool hit = !dilate;  // erode: all must be set; dilate: any
            for (const auto& [dx, dy] : offsets) {
                const int xi = x + dx, yi = y + dy;
                bool v = false;
                if (xi >= 0 && xi < mask.width && yi >= 0 && yi < mask.height) v = mask.at(xi, yi);
                if (dilate) {
                    if (v) {
                        hit = true;
                        break;
                    }
                } else {
                    if (!v) {
                        hit = false;
                        break;
                    }
                }
            }
            out.set(x, y, hit);
        }
    }
    return out;
}

}  // namespace

BinaryMask morph(const BinaryMask& mask, MorphOp op, int kernel_diameter) {
    const auto offsets = disk_offsets(kernel_diameter);
    switch (op) {
        case MorphOp::Dilate:
            return dilate_or_erode(mask, true, offsets);
        case MorphOp::Erode:
            return dilate_or_erode(mask, false, offsets);
        case MorphOp::Open:
            return dilate_or_erode(dilate_or_erode(mask, false, offsets), true, offsets);
        case MorphOp::Close:
            return dilate_or_erode(dilate_or_erode(mask, true, offsets), false, offsets);
    }
    throw std::logic_error("morph: unknown op");
}

BinaryMask largest_component(const BinaryMask& mask) {
    BinaryMask out(mask.width, mask.height);
    std::vector<int32_t> label(mask.data.size(), -1);
    std::vector<size_t> stack;
    int best_label = -1;
    size_t best_size = 0;
    int next_label = 0;
    for (size_t start = 0; start < mask.data.size(); ++start) {
        if (!mask.data[start] || label[start] >= 0) continue;
        size_t size = 0;
        stack.push_back(start);
        label[start] = next_label;
        while (!stack.empty()) {
            const size_t p = stack.back();
            stack.pop_back();
            ++size;
            const int x = static_cast<int>(p % mask.width);
            const int y = static_cast<int>(p / mask.width);
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int xi = x + dx, yi = y + dy;
                    if (xi < 0 || xi >= mask.width || yi < 0 || yi >= mask.height) continue;
                    const size_t q = mask.index(xi, yi);
                    if (mask.data[q] && label[q] < 0) {
                        label[q] = next_label;
                        stack.push_back(q);
                    }
                }
            }
        }
        if (size > best_size) {
            best_size = size;
            best_label = next_label;
        }
        ++next_label;
    }
    if (best_label >= 0)
        for (size_t i = 0; i < label.size(); ++i)
            if (label[i] == best_label) out.data[i] = 1;
    return out;
}

// ---------------------------------------------------------------------------
// Polygon rasterization
// ---------------------------------------------------------------------------

namespace {

Vec2 catmull_rom_point(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3, double u) {
    // Centripetal parameterization (alpha = 0.5), Barry-Goldman evaluation.
    auto knot = [](double t, const Vec2& a, const Vec2& b) {
        const double d = std::sqrt((b - a).norm());
        return t + std::max(d, 1e-9);
    };
    const double t0 = 0.0;
    const double t1 = knot(t0, p0, p1);
    const double t2 = knot(t1, p1, p2);
    const double t3 = knot(t2, p2, p3);
    const double t = t1 + u * (t2 - t1);
    auto lerp = [](const Vec2& a, const Vec2& b, double ta, double tb, double t) {
        const double w = (t - ta) / (tb - ta);
        return a * (1.0 - w) + b * w;
    };
    const Vec2 a1 = lerp(p0, p1, t0, t1, t);
    const Vec2 a2 = lerp(p1, p2, t1, t2, t);
    const Vec2 a3 = lerp(p2, p3, t2, t3, t);
    const Vec2 b1 = lerp(a1, a2, t0, t2, t);
    const Vec2 b2 = lerp(a2, a3, t1, t3, t);
    return lerp(b1, b2, t1, t2, t);
}

}  // namespace

std::vector<Vec2> catmull_rom_closed(std::span<const Vec2> points, int subdivisions) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw std::invalid_argument("catmull_rom_closed: need >= 3 points");
    if (subdivisions < 1) throw std::invalid_argument("catmull_rom_closed: subdivisions >= 1");
    std::vector<Vec2> out;
    out.reserve(static_cast<size_t>(n) * subdivisions);
    for (int i = 0; i < n; ++i) {
        const Vec2& p0 = points[(i + n - 1) % n];
        const Vec2& p1 = points[i];
        const Vec2& p2 = points[(i + 1) % n];
        const Vec2& p3 = points[(i + 2) % n];
        for (int s = 0; s < subdivisions; ++s)
            out.push_back(catmull_rom_point(p0, p1, p2, p3, static_cast<double>(s) / subdivisions));
    }
    return out;
}

double polygon_area(std::span<const Vec2> points) {
    double a = 0.0;
    const size_t n = points.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = points[i];
        const Vec2& q = points[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

BinaryMask fill_polygon(std::span<const Vec2> points, bool smooth, int width, int height,
                        bool* degenerate) {
    if (points.size() < 3) throw std::invalid_argument("fill_polygon: need >= 3 points");
    if (degenerate) *degenerate = false;

    std::vector<Vec2> boundary;
    if (smooth) {
        boundary = catmull_rom_closed(points, 16);
    } else {
        boundary.assign(points.begin(), points.end());
    }

    BinaryMask out(width, height);
    if (std::abs(polygon_area(boundary)) < 1e-9) {
        if (degenerate) *degenerate = true;
        return out;
    }

    const size_t n = boundary.size();
    std::vector<double> xs;
    for (int y = 0; y < height; ++y) {
        const double yc = y + 0.5;
        xs.clear();
        for (size_t i = 0; i < n; ++i) {
            const Vec2& a = boundary[i];
            const Vec2& b = boundary[(i + 1) % n];
            if (a.y == b.y) continue;
            const double ymin = std::min(a.y, b.y);
            const double ymax = std::max(a.y, b.y);
            if (yc < ymin || yc >= ymax) continue;  // half-open rule at vertices
            xs.push_back(a.x + (yc - a.y) / (b.y - a.y) * (b.x - a.x));
        }
        std::sort(xs.begin(), xs.end());
        for (size_t i = 0; i + 1 < xs.size(); i += 2) {
            const int x0 = std::max(0, static_cast<int>(std::ceil(xs[i] - 0.5)));
            const int x1 = std::min(width - 1, static_cast<int>(std::floor(xs[i + 1] - 0.5)));
            for (int x = x0; x <= x1; ++x) out.set(x, y, true);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rigid fitting
// ---------------------------------------------------------------------------

Vec2 SimilarityTransform::apply(const Vec2& p) const {
    const double c = std::cos(rotation), s = std::sin(rotation);
    return {scale * (c * p.x - s * p.y) + translation.x,
            scale * (s * p.x + c * p.y) + translation.y};
}

SimilarityTransform SimilarityTransform::inverse() const {
    SimilarityTransform inv;
    inv.rotation = -rotation;
    inv.scale = 1.0 / scale;
    const double c = std::cos(inv.rotation), s = std::sin(inv.rotation);
    inv.translation = {-inv.scale * (c * translation.x - s * translation.y),
                       -inv.scale * (s * translation.x + c * translation.y)};
    return inv;
}

SimilarityTransform fit_rigid(std::span<const Vec2> src, std::span<const Vec2> dst,
                              bool with_scale) {
    if (src.size() != dst.size()) throw std::invalid_argument("fit_rigid: size mismatch");
    const size_t n = src.size();
    if (n < 2) throw std::invalid_argument("fit_rigid: need >= 2 corresponding points");

    Vec2 mu_s{0, 0}, mu_d{0, 0};
    for (size_t i = 0; i < n; ++i) {
        mu_s = mu_s + src[i];
        mu_d = mu_d + dst[i];
    }
    mu_s = mu_s * (1.0 / n);
    mu_d = mu_d * (1.0 / n);

    double a = 0.0, b = 0.0, var_s = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2 p = src[i] - mu_s;
        const Vec2 q = dst[i] - mu_d;
        a += p.x * q.x + p.y * q.y;
        b += p.x * q.y - p.y * q.x;
        var_s += p.x * p.x + p.y * p.y;
    }
    if (var_s < 1e-12) throw std::invalid_argument("fit_rigid: coincident source points");

    SimilarityTransform t;
    t.rotation = std::atan2(b, a);
    t.scale = with_scale ? std::sqrt(a * a + b * b) / var_s : 1.0;
    const double c = std::cos(t.rotation), s = std::sin(t.rotation);
    t.translation = {mu_d.x - t.scale * (c * mu_s.x - s * mu_s.y),
                     mu_d.y - t.scale * (s * mu_s.x + c * mu_s.y)};

    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2 r = t.apply(src[i]) - dst[i];
        ss += r.dot(r);
    }
    t.residual_rms = std::sqrt(ss / n);
    return t;
}

// ---------------------------------------------------------------------------
// Resampling and compositing
// ---------------------------------------------------------------------------

namespace {

float sample_bilinear(const ImageBuffer& img, double x, double y, int c) {
    const double xc = std::min(static_cast<double>(img.width - 1), std::max(0.0, x));
    const double yc = std::min(static_cast<double>(img.height - 1), std::max(0.0, y));
    const int x0 = static_cast<int>(xc);
    const int y0 = static_cast<int>(yc);
    const int x1 = std::min(img.width - 1, x0 + 1);
    const int y1 = std::min(img.height - 1, y0 + 1);
    const double fx = xc - x0, fy = yc - y0;
    return static_cast<float>((1 - fx) * (1 - fy) * img.at(x0, y0, c) +
                              fx * (1 - fy) * img.at(x1, y0, c) +
                              (1 - fx) * fy * img.at(x0, y1, c) + fx * fy * img.at(x1, y1, c));
}

}  // namespace

ImageBuffer resize_bilinear(const ImageBuffer& img, int new_width, int new_height) {
    if (new_width < 1 || new_height < 1)
        throw std::invalid_argument("resize_bilinear: bad target size");
    ImageBuffer out(new_width, new_height, img.channels);
    const double sx = static_cast<double>(img.width) / new_width;
    const double sy = static_cast<double>(img.height) / new_height;
    for (int y = 0; y < new_height; ++y)
        for (int x = 0; x < new_width; ++x)
            for (int c = 0; c < img.channels; ++c)
                out.at(x, y, c) =
                    sample_bilinear(img, (x + 0.5) * sx - 0.5, (y + 0.5) * sy - 0.5, c);
    return out;
}

void warp_similarity(const ImageBuffer& src_rgb, const ImageBuffer& src_alpha,
                     const SimilarityTransform& t, int dst_width, int dst_height,
                     ImageBuffer& out_rgb, ImageBuffer& out_alpha) {
    if (src_alpha.channels != 1 || src_alpha.width != src_rgb.width ||
        src_alpha.height != src_rgb.height)
        throw std::invalid_argument("warp_similarity: alpha plane mismatch");
    out_rgb = ImageBuffer(dst_width, dst_height, src_rgb.channels);
    out_alpha = ImageBuffer(dst_width, dst_height, 1);
    const SimilarityTransform inv = t.inverse();
    for (int y = 0; y < dst_height; ++y) {
        for (int x = 0; x < dst_width; ++x) {
            const Vec2 p = inv.apply({static_cast<double>(x), static_cast<double>(y)});
            if (p.x < -0.5 || p.y < -0.5 || p.x > src_rgb.width - 0.5 ||
                p.y > src_rgb.height - 0.5)
                continue;
            out_alpha.at(x, y) = sample_bilinear(src_alpha, p.x, p.y, 0);
            for (int c = 0; c < src_rgb.channels; ++c)
                out_rgb.at(x, y, c) = sample_bilinear(src_rgb, p.x, p.y, c);
        }
    }
}

ImageBuffer mask_to_image(const BinaryMask& mask) {
    ImageBuffer out(mask.width, mask.height, 1);
    for (size_t i = 0; i < mask.data.size(); ++i) out.data[i] = mask.data[i] ? 1.0f : 0.0f;
    return out;
}

BinaryMask image_to_mask(const ImageBuffer& img, float threshold) {
    if (img.channels != 1) throw std::invalid_argument("image_to_mask: 1-channel input required");
    BinaryMask out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) out.data[i] = img.data[i] > threshold ? 1 : 0;
    return out;
}

}  // namespace gazeforge
