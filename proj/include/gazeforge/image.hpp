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

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace gazeforge {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const;
};

/// Row-major interleaved float raster with values in [0, 1].
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 (gray / plane) or 3 (RGB or YCrCb)
    std::vector<float> data;

    ImageBuffer() = default;
    ImageBuffer(int w, int h, int c, float fill = 0.0f);

    size_t index(int x, int y, int c) const {
        return (static_cast<size_t>(y) * width + x) * channels + c;
    }
    float& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }
    float at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
    bool same_shape(const ImageBuffer& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
    void clamp01();
};

/// Boolean raster; dimensions track the image it annotates.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;  // 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill ? 1 : 0) {}

    size_t index(int x, int y) const { return static_cast<size_t>(y) * width + x; }
    bool at(int x, int y) const { return data[index(x, y)] != 0; }
    void set(int x, int y, bool v) { data[index(x, y)] = v ? 1 : 0; }

    size_t count() const;
    bool same_shape(const BinaryMask& o) const { return width == o.width && height == o.height; }
    bool empty_mask() const { return count() == 0; }
};

/// Sparse landmark table keyed by canonical landmark id.
class LandmarkSet {
public:
    void set(int id, Vec2 p) { points_[id] = p; }
    bool has(int id) const { return points_.count(id) != 0; }
    const Vec2& at(int id) const {
        auto it = points_.find(id);
        if (it == points_.end()) throw std::out_of_range("landmark id not present");
        return it->second;
    }
    size_t size() const { return points_.size(); }
    const std::map<int, Vec2>& points() const { return points_; }

private:
    std::map<int, Vec2> points_;
};

}  // namespace gazeforge
