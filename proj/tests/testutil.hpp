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

#include <filesystem>
#include <random>
#include <string>

#include "gazeforge/image.hpp"
#include "gazeforge/rng.hpp"

namespace gftest {

/// Self-cleaning temp directory for file-based tests.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("gazeforge_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }

private:
    static int& counter() {
        static int c = 0;
        return c;
    }
};

inline gazeforge::ImageBuffer random_image(gazeforge::Rng& rng, int w, int h, int c) {
    gazeforge::ImageBuffer img(w, h, c);
    for (float& v : img.data) v = static_cast<float>(rng.uniform());
    return img;
}

inline gazeforge::BinaryMask random_mask(gazeforge::Rng& rng, int w, int h, double p = 0.5) {
    gazeforge::BinaryMask m(w, h);
    for (auto& v : m.data) v = rng.uniform() < p ? 1 : 0;
    return m;
}

}  // namespace gftest
