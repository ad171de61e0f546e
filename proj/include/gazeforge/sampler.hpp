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
#include <set>
#include <string>
#include <vector>

#include "gazeforge/gridcodec.hpp"

namespace gazeforge {

struct SampleRecord {
    std::string sample_id;
    std::string dataset_id;
    std::string subject_id;
    GazeAngles gaze;
    double head_pitch = 0.0;
    double head_yaw = 0.0;
    bool glasses = false;
    bool mask = false;
    std::string image_path;
    std::string matte_path;
    std::string landmarks_path;
};

struct SampleRegistry {
    std::vector<SampleRecord> records;
    const SampleRecord* find(const std::string& sample_id) const;
};

struct IngestReport {
    size_t kept = 0;
    size_t dropped_gaze = 0;
    size_t dropped_head = 0;
    std::vector<std::string> malformed;  // description per skipped record
};

/// Filter records onto the gaze and head-pose intervals. Records with
/// non-finite labels or duplicated ids are listed as malformed and skipped.
SampleRegistry ingest(const std::vector<SampleRecord>& records, const GazeInterval& gaze_interval,
                      const GazeInterval& head_interval, IngestReport* report = nullptr);

/// JSONL manifest, one sample per line. Malformed lines are reported and
/// skipped, never fatal.
std::vector<SampleRecord> load_manifest(const std::string& path,
                                        std::vector<std::string>* malformed = nullptr);
void save_manifest(const std::string& path, const std::vector<SampleRecord>& records);

enum class EmptyCellPolicy { Error, Skip };

struct PlanParams {
    int quota = 640;
    uint64_t seed = 0;
    int epoch = 0;
    EmptyCellPolicy policy = EmptyCellPolicy::Error;
    std::set<std::string> subject_balanced_datasets;
};

struct PlanEntry {
    std::string sample_id;
    int epoch = 0;
    int64_t draw_index = 0;
};

struct EpochPlan {
    std::vector<PlanEntry> entries;
    /// Draw counts keyed by (dataset_id, linear bin index).
    std::map<std::pair<std::string, int>, int64_t> cell_counts;
};

/// Stratified epoch plan: `quota` draws per (dataset, bin) cell, cycling a
/// per-cell shuffle when the cell holds fewer members than the quota.
/// Subject-balanced datasets distribute draws round-robin over the cell's
/// subjects. Fully determined by (seed, epoch).
EpochPlan plan_epoch(const SampleRegistry& registry, const GridSpec& grid,
                     const PlanParams& params);

std::map<std::string, int64_t> subject_histogram(const EpochPlan& plan,
                                                 const SampleRegistry& registry);

void save_plan(const std::string& path, const EpochPlan& plan);
EpochPlan load_plan(const std::string& path);

/// Linear bin index used for plan cells: pitch_bin * n_yaw + yaw_bin.
int linear_bin(const GazeAngles& gaze, const GridSpec& grid);

}  // namespace gazeforge
