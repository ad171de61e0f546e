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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazeforge/geometry.hpp"

namespace gazeforge {

/// Session letters a..i. Named subsets: Ideal {a,b}, Side-Lit {c,d},
/// Glasses {e,f}, Masks {g,h}; session i contributes to Overall only.
bool session_tag_valid(char session);
std::vector<std::string> group_names();
std::vector<char> group_sessions(const std::string& group);  // empty => all (Overall)

struct PredictionRecord {
    std::string sample_id;
    std::string subject;
    std::string session;     // single letter a..i (screen mode)
    std::string view;        // clean | glasses | mask (zerogaze mode)
    std::string triplet_id;  // groups the three zerogaze views
    std::optional<Vec2> pred_pog, gt_pog;              // mm
    std::optional<GazeAngles> pred_gaze, gt_gaze;      // degrees
    std::optional<std::array<double, 3>> head_pose;    // pitch, yaw, roll
};

/// Clamp angle-space predictions onto the evaluation interval.
void clamp_predictions(std::vector<PredictionRecord>& records, const GazeInterval& interval);

struct ScreenErrors {
    double dx = 0.0;  // mean |x error|, mm
    double dy = 0.0;  // mean |y error|, mm
    double d2 = 0.0;  // mean Euclidean error, mm
    size_t count = 0;
};

/// Screen-space errors over records carrying points of gaze.
ScreenErrors screen_errors(std::span<const PredictionRecord> records);

struct AngularErrors {
    double d = 0.0;      // mean 3-D angular error, degrees
    double d_pitch = 0.0;
    double d_yaw = 0.0;
    size_t count = 0;
};

AngularErrors angular_errors(std::span<const PredictionRecord> records);

struct GroupRow {
    std::string group;
    ScreenErrors errors;
    bool present = false;
};

struct GroupReport {
    std::vector<GroupRow> rows;
    std::vector<std::string> notes;

    std::string to_csv() const;
    std::string to_text() const;
};

/// Five-group session table. With exclude_reduced_subjects, subjects whose
/// sessions do not cover a..h contribute to Overall only.
GroupReport group_report(std::span<const PredictionRecord> records,
                         bool exclude_reduced_subjects = false);

struct ViewBias {
    double mean_pitch = 0.0, mean_yaw = 0.0;
    double std_pitch = 0.0, std_yaw = 0.0;
    double p95_radius = 0.0;  // 95th percentile of sqrt(pitch^2 + yaw^2)
    size_t count = 0;
};

/// Prediction bias statistics keyed by view tag; all-zero ground truth is
/// implied, so the mean prediction is the visual bias.
std::map<std::string, ViewBias> zerogaze_stats(std::span<const PredictionRecord> records);

struct PoseFilterResult {
    std::vector<PredictionRecord> retained;
    size_t dropped_incomplete = 0;  // triplets missing a view
    size_t dropped_pose = 0;        // triplets violating the tolerances
};

/// Keep only complete {clean, glasses, mask} triplets whose three head poses
/// all satisfy |pitch| < pitch_tol and |yaw|, |roll| < other_tol.
PoseFilterResult pose_filter(std::span<const PredictionRecord> records, double pitch_tol = 10.0,
                             double other_tol = 5.0);

/// Prediction CSV (same schema family as the calibration pairs; angular and
/// zerogaze columns are recognized when present).
std::vector<PredictionRecord> load_prediction_records(const std::string& path);

}  // namespace gazeforge
