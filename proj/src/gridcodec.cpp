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

#include "gazeforge/gridcodec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gazeforge {

GridSpec GridSpec::from_bin_size(const GazeInterval& interval, double size_deg) {
    if (!interval.valid()) throw std::invalid_argument("GridSpec: invalid interval");
    if (size_deg <= 0.0) throw std::invalid_argument("GridSpec: bin size must be positive");
    const double np = interval.pitch_width() / size_deg;
    const double ny = interval.yaw_width() / size_deg;
    if (std::abs(np - std::round(np)) > 1e-9 || std::abs(ny - std::round(ny)) > 1e-9)
        throw std::invalid_argument("GridSpec: interval widths not a multiple of bin size");
    return {interval, static_cast<int>(std::round(np)), static_cast<int>(std::round(ny))};
}

int discretize_axis(double value_deg, Axis axis, const GridSpec& grid) {
    const double lo = axis == Axis::Pitch ? grid.interval.pitch_min : grid.interval.yaw_min;
    const double hi = axis == Axis::Pitch ? grid.interval.pitch_max : grid.interval.yaw_max;
    if (!(value_deg >= lo && value_deg <= hi))
        throw std::out_of_range("discretize: value outside the gaze interval");
    const int n = grid.bins(axis);
    const int c = static_cast<int>(std::floor((value_deg - lo) / grid.bin_size(axis)));
    return std::min(c, n - 1);  // exact upper boundary folds into the last bin
}

std::pair<int, int> discretize(const GazeAngles& a, const GridSpec& grid) {
    return {discretize_axis(a.pitch, Axis::Pitch, grid), discretize_axis(a.yaw, Axis::Yaw, grid)};
}

double centroid(int i, Axis axis, const GridSpec& grid) {
    if (i < 0 || i >= grid.bins(axis)) throw std::out_of_range("centroid: bin index out of range");
    const double lo = axis == Axis::Pitch ? grid.interval.pitch_min : grid.interval.yaw_min;
    return lo + (i + 0.5) * grid.bin_size(axis);
}

double decode_expectation(const BinProbabilities& p, Axis axis, const GridSpec& grid) {
    if (static_cast<int>(p.size()) != grid.bins(axis))
        throw std::invalid_argument("decode_expectation: probability length mismatch");
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0) throw std::invalid_argument("decode_expectation: negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-4)
        throw std::invalid_argument("decode_expectation: probabilities not normalized");
    double acc = 0.0;
    for (size_t i = 0; i < p.size(); ++i) acc += p[i] * centroid(static_cast<int>(i), axis, grid);
    return acc;
}

BinProbabilities sharpened_softmax(std::span<const double> logits, double tau) {
    if (tau <= 0.0) throw std::invalid_argument("sharpened_softmax: tau must be positive");
    if (logits.empty()) throw std::invalid_argument("sharpened_softmax: empty logits");
    const double m = *std::max_element(logits.begin(), logits.end());
    BinProbabilities p(logits.size());
    double sum = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp((logits[i] - m) / tau);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

}  // namespace gazeforge
