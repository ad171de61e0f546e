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

#include "gazeforge/losses.hpp"

namespace gazeforge {

/// Feature dump: a single-line JSON header {"n":..,"d":..,"fields":[..]}
/// followed by n*d little-endian float32 values; row metadata lives in a
/// JSON-lines sidecar with one object per row.
void write_feature_dump(const std::string& features_path, const std::string& meta_path,
                        const FeatureBatch& batch);

FeatureBatch load_feature_dump(const std::string& features_path, const std::string& meta_path);

}  // namespace gazeforge
