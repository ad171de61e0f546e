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

#include "gazeforge/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gazeforge {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        size_t a = field.find_first_not_of(" \t\r");
        size_t b = field.find_last_not_of(" \t\r");
        out.push_back(a == std::string::npos ? std::string{} : field.substr(a, b - a + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void CsvTable::require(const std::vector<std::string>& names) const {
    for (const auto& n : names)
        if (!has(n)) throw std::runtime_error("CSV is missing required column '" + n + "'");
}

const std::string& CsvTable::get(size_t row, const std::string& name) const {
    return rows.at(row).at(column.at(name));
}

std::string CsvTable::get_or(size_t row, const std::string& name,
                             const std::string& fallback) const {
    if (!has(name)) return fallback;
    const auto& r = rows.at(row);
    const size_t c = column.at(name);
    return c < r.size() ? r[c] : fallback;
}

double CsvTable::get_double(size_t row, const std::string& name) const {
    const std::string& s = get(row, name);
    size_t consumed = 0;
    const double v = std::stod(s, &consumed);
    if (consumed == 0) throw std::runtime_error("CSV field '" + name + "' is not numeric: " + s);
    return v;
}

CsvTable load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open CSV: " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty CSV: " + path);
    t.header = split_line(line);
    for (size_t i = 0; i < t.header.size(); ++i) t.column[t.header[i]] = i;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto fields = split_line(line);
        fields.resize(t.header.size());
        t.rows.push_back(std::move(fields));
    }
    return t;
}

}  // namespace gazeforge
