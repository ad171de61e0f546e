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
#include <span>
#include <string>
#include <vector>

#include "gazeforge/image.hpp"

namespace gazeforge {

/// Per-axis linear correction: corrected = slope * prediction + intercept.
struct CalibrationModel {
    double slope_x = 1.0;
    double intercept_x = 0.0;
    double slope_y = 1.0;
    double intercept_y = 0.0;
    bool degenerate_fallback = false;  // set when a slope fit was impossible
};

struct GazePointPair {
    Vec2 pred;  // mm
    Vec2 gt;    // mm
    std::string sample_id;
    std::string subject;
    std::string session;
};

/// Average of the k pairs whose ground truths lie closest to `center`.
/// Distance ties keep the earlier pair (stable order).
GazePointPair select_center_points(std::span<const GazePointPair> pairs, int k = 3,
                                   Vec2 center = {0.0, 0.0});

/// One averaged pair per anchor location (the 5-point selection uses the
/// screen center plus the four corners, each averaging its k nearest pairs).
std::vector<GazePointPair> select_anchor_points(std::span<const GazePointPair> pairs,
                                                std::span<const Vec2> anchors, int k = 3);

/// Screen center and corner anchors derived from the ground-truth extent.
std::vector<Vec2> screen_anchors_from_extent(std::span<const GazePointPair> pairs);

/// Intercept-only model: slope 1, intercept = gt - pred per axis.
CalibrationModel fit_one_point(const GazePointPair& pair);

/// Independent per-axis ordinary least squares of gt on prediction. With a
/// degenerate prediction spread on an axis the fit falls back to
/// intercept-only on that axis and flags the model.
CalibrationModel fit_npoint(std::span<const GazePointPair> pairs);

Vec2 apply(const CalibrationModel& model, const Vec2& pred);

struct CalibrationErrors {
    double dx = 0.0;  // mean |x error|, mm
    double dy = 0.0;  // mean |y error|, mm
    double d2 = 0.0;  // mean Euclidean error, mm
    size_t count = 0;
};

/// Errors of calibrated predictions against ground truth.
CalibrationErrors evaluate_pairs(std::span<const GazePointPair> pairs,
                                 const CalibrationModel& model);

struct MpiiProtocolResult {
    std::map<std::string, CalibrationErrors> per_subject;  // median over repetitions
    CalibrationErrors mean;                                // mean of subject medians
};

/// Random-draw calibration protocol: per subject, draw n_c calibration pairs,
/// fit (intercept-only when n_c == 1), evaluate on the remainder; repeat and
/// report the per-subject median of each error metric over `reps`.
MpiiProtocolResult mpii_protocol(const std::map<std::string, std::vector<GazePointPair>>& subjects,
                                 int n_c, int reps, uint64_t seed);

/// Prediction CSV with header columns sample_id, pred_x_mm, pred_y_mm,
/// gt_x_mm, gt_y_mm, subject, session.
std::vector<GazePointPair> load_point_pairs(const std::string& path);

std::string model_to_json(const CalibrationModel& model);
CalibrationModel model_from_json(const std::string& text);

}  // namespace gazeforge
