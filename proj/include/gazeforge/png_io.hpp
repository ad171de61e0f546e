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

#include <string>

#include "gazeforge/image.hpp"

namespace gazeforge {

/// Read an 8-bit PNG into [0,1] floats. Gray -> 1 channel, RGB -> 3; an alpha
/// channel, when present, is dropped unless requested via read_png_rgba.
ImageBuffer read_png(const std::string& path);

/// Read an RGBA PNG as an RGB buffer plus a 1-channel alpha plane. Images
/// without alpha yield an all-opaque plane.
void read_png_rgba(const std::string& path, ImageBuffer& rgb, ImageBuffer& alpha);

/// Write 1- or 3-channel floats as an 8-bit PNG (round(v*255), clamped).
void write_png(const std::string& path, const ImageBuffer& img);

/// Write RGB + alpha plane as an 8-bit RGBA PNG.
void write_png_rgba(const std::string& path, const ImageBuffer& rgb, const ImageBuffer& alpha);

/// Masks as 1-channel 0/255 PNG; values >= 128 read back as true.
BinaryMask read_mask_png(const std::string& path);
void write_mask_png(const std::string& path, const BinaryMask& mask);

}  // namespace gazeforge
