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

#include <stdexcept>
#include <string>

#include "gazeforge/annotate.hpp"
#include "gazeforge/augment.hpp"
#include "gazeforge/losses.hpp"
#include "gazeforge/sampler.hpp"

namespace gazeforge {

/// Schema violation in a configuration file (unknown key, bad type, broken
/// invariant). Distinct from missing-file errors for CLI exit codes.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SamplingConfig {
    int quota_per_bin = 640;
    std::set<std::string> subject_balanced_datasets = {"C"};
    EmptyCellPolicy empty_cell_policy = EmptyCellPolicy::Error;
};

struct LandmarkConfig {
    std::vector<int> glasses_anchor_ids = {105, 334, 119, 348};
    std::vector<int> mask_polygon_ids = {6, 355, 323, 288, 365, 378, 152, 149, 136, 58, 93, 126};
    std::vector<std::pair<int, int>> flip_swap_pairs;
};

/// Aggregated run configuration; the shipped defaults reproduce every
/// numeric constant used across the toolkit.
struct RunConfig {
    int schema_version = 1;
    uint64_t seed = 1234;
    GazeInterval gaze_interval{-30.0, 14.0, -26.0, 26.0};
    GazeInterval head_pose_interval{-30.0, 30.0, -30.0, 30.0};
    double bin_size_deg = 4.0;
    SamplingConfig sampling;
    LossWeights weights;
    CompositeOptions composite;
    AugmentProtocol protocol;
    AnnotateConfig annotate_config;
    LandmarkConfig landmarks;
    ScreenGeometry screen;

    GridSpec grid() const { return GridSpec::from_bin_size(gaze_interval, bin_size_deg); }
    void validate() const;
};

RunConfig default_run_config();

/// Strict parse: unknown keys anywhere in the document are rejected.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

std::string run_config_to_json(const RunConfig& config);

}  // namespace gazeforge
