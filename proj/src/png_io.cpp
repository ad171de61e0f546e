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

#include "gazeforge/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace gazeforge {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

// Decode to 8-bit samples with `want_channels` in {1, 3, 4}.
std::vector<uint8_t> decode_png(const std::string& path, int want_channels, int& w, int& h) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open PNG for reading: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("failed to decode PNG: " + path);
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_packing(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY &&
        png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);

    if (want_channels == 1) {
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
        png_set_strip_alpha(png);
    } else {
        if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
            png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA)
            png_set_gray_to_rgb(png);
        if (want_channels == 3)
            png_set_strip_alpha(png);
        else
            png_set_add_alpha(png, 0xFF, PNG_FILLER_AFTER);
    }
    png_read_update_info(png, info);

    w = static_cast<int>(png_get_image_width(png, info));
    h = static_cast<int>(png_get_image_height(png, info));
    const size_t stride = png_get_rowbytes(png, info);
    if (stride != static_cast<size_t>(w) * want_channels) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("unexpected PNG row stride: " + path);
    }

    std::vector<uint8_t> buf(stride * h);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = buf.data() + stride * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return buf;
}

bool png_is_gray(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open PNG for reading: " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info) throw std::runtime_error("libpng init failed");
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("failed to read PNG header: " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);
    const int ct = png_get_color_type(png, info);
    png_destroy_read_struct(&png, &info, nullptr);
    return ct == PNG_COLOR_TYPE_GRAY || ct == PNG_COLOR_TYPE_GRAY_ALPHA;
}

void encode_png(const std::string& path, const uint8_t* data, int w, int h, int channels) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("cannot open PNG for writing: " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("failed to encode PNG: " + path);
    }
    png_init_io(png, fp.get());
    const int color = channels == 1   ? PNG_COLOR_TYPE_GRAY
                      : channels == 3 ? PNG_COLOR_TYPE_RGB
                                      : PNG_COLOR_TYPE_RGBA;
    png_set_IHDR(png, info, w, h, 8, color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y)
        rows[y] = const_cast<png_bytep>(data + static_cast<size_t>(y) * w * channels);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

uint8_t to_byte(float v) {
    const float c = std::min(1.0f, std::max(0.0f, v));
    return static_cast<uint8_t>(std::lround(c * 255.0f));
}

}  // namespace

ImageBuffer read_png(const std::string& path) {
    const int channels = png_is_gray(path) ? 1 : 3;
    int w = 0, h = 0;
    const auto bytes = decode_png(path, channels, w, h);
    ImageBuffer img(w, h, channels);
    for (size_t i = 0; i < bytes.size(); ++i) img.data[i] = bytes[i] / 255.0f;
    return img;
}

void read_png_rgba(const std::string& path, ImageBuffer& rgb, ImageBuffer& alpha) {
    int w = 0, h = 0;
    const auto bytes = decode_png(path, 4, w, h);
    rgb = ImageBuffer(w, h, 3);
    alpha = ImageBuffer(w, h, 1);
    const size_t n = static_cast<size_t>(w) * h;
    for (size_t i = 0; i < n; ++i) {
        rgb.data[3 * i + 0] = bytes[4 * i + 0] / 255.0f;
        rgb.data[3 * i + 1] = bytes[4 * i + 1] / 255.0f;
        rgb.data[3 * i + 2] = bytes[4 * i + 2] / 255.0f;
        alpha.data[i] = bytes[4 * i + 3] / 255.0f;
    }
}

void write_png(const std::string& path, const ImageBuffer& img) {
    std::vector<uint8_t> bytes(img.data.size());
    for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = to_byte(img.data[i]);
    encode_png(path, bytes.data(), img.width, img.height, img.channels);
}

void write_png_rgba(const std::string& path, const ImageBuffer& rgb, const ImageBuffer& alpha) {
    if (rgb.channels != 3 || alpha.channels != 1 || rgb.width != alpha.width ||
        rgb.height != alpha.height)
        throw std::invalid_argument("write_png_rgba: alpha plane mismatch");
    const size_t n = rgb.pixel_count();
    std::vector<uint8_t> bytes(n * 4);
    for (size_t i = 0; i < n; ++i) {
        bytes[4 * i + 0] = to_byte(rgb.data[3 * i + 0]);
        bytes[4 * i + 1] = to_byte(rgb.data[3 * i + 1]);
        bytes[4 * i + 2] = to_byte(rgb.data[3 * i + 2]);
        bytes[4 * i + 3] = to_byte(alpha.data[i]);
    }
    encode_png(path, bytes.data(), rgb.width, rgb.height, 4);
}

BinaryMask read_mask_png(const std::string& path) {
    int w = 0, h = 0;
    const auto bytes = decode_png(path, 1, w, h);
    BinaryMask mask(w, h);
    for (size_t i = 0; i < bytes.size(); ++i) mask.data[i] = bytes[i] >= 128 ? 1 : 0;
    return mask;
}

void write_mask_png(const std::string& path, const BinaryMask& mask) {
    std::vector<uint8_t> bytes(mask.data.size());
    for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.data[i] ? 255 : 0;
    encode_png(path, bytes.data(), mask.width, mask.height, 1);
}

}  // namespace gazeforge
