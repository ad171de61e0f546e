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
#include <utility>
#include <vector>

#include "gazeforge/geometry.hpp"

namespace gazeforge {

enum class Axis { Pitch, Yaw };

/// Per-axis probability vector; nonnegative, sums to 1 within 1e-6.
using BinProbabilities = std::vector<double>;

/// Partition of a gaze interval into per-axis bins. Bin indices are 0-based.
struct GridSpec {
    GazeInterval interval;
    int n_pitch = 0;
    int n_yaw = 0;

    double bin_size(Axis axis) const {
        return axis == Axis::Pitch ? interval.pitch_width() / n_pitch
                                   : interval.yaw_width() / n_yaw;
    }
    int bins(Axis axis) const { return axis == Axis::Pitch ? n_pitch : n_yaw; }
    int total_bins() const { return n_pitch * n_yaw; }
    bool valid() const { return interval.valid() && n_pitch >= 1 && n_yaw >= 1; }

    /// Derive bin counts from a target bin size; the interval widths must be
    /// integer multiples of the size (within 1e-9).
    static GridSpec from_bin_size(const GazeInterval& interval, double size_deg);
};

/// Floor binning; the exact upper interval boundary folds into the last bin.
/// Out-of-interval input is rejected (clamp first).
int discretize_axis(double value_deg, Axis axis, const GridSpec& grid);
std::pair<int, int> discretize(const GazeAngles& a, const GridSpec& grid);

/// Centroid of bin i (0-based): min + (i + 1/2) * bin_size.
double centroid(int i, Axis axis, const GridSpec& grid);

/// Expectation of the bin centroids under p. Rejects p unless it sums to 1
/// within 1e-4 and has no negative entries.
double decode_expectation(const BinProbabilities& p, Axis axis, const GridSpec& grid);

/// softmax(logits / tau), max-subtracted for numeric stability.
BinProbabilities sharpened_softmax(std::span<const double> logits, double tau);

}  // namespace gazeforge
