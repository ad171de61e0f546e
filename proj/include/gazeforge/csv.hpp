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

#include <map>
#include <string>
#include <vector>

namespace gazeforge {

/// Header-indexed comma-separated table. Columns not required by the caller
/// are carried along untouched.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, size_t> column;

    bool has(const std::string& name) const { return column.count(name) != 0; }
    void require(const std::vector<std::string>& names) const;
    const std::string& get(size_t row, const std::string& name) const;
    std::string get_or(size_t row, const std::string& name, const std::string& fallback) const;
    double get_double(size_t row, const std::string& name) const;
};

CsvTable load_csv(const std::string& path);

}  // namespace gazeforge
