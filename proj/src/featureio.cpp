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

#include "gazeforge/featureio.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace gazeforge {

namespace {

using nlohmann::json;

const char* kFields[] = {"sample_id", "view_index", "dataset_id", "subject_id",
                         "glasses",   "mask",       "pitch",      "yaw",
                         "flip"};

void put_f32_le(std::ostream& os, float v) {
    const uint32_t u = std::bit_cast<uint32_t>(v);
    const char b[4] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
                       static_cast<char>((u >> 16) & 0xff), static_cast<char>((u >> 24) & 0xff)};
    os.write(b, 4);
}

float get_f32_le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("feature dump truncated");
    const uint32_t u = static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
                       (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
    return std::bit_cast<float>(u);
}

}  // namespace

void write_feature_dump(const std::string& features_path, const std::string& meta_path,
                        const FeatureBatch& batch) {
    if (static_cast<int>(batch.meta.size()) != batch.n())
        throw std::invalid_argument("write_feature_dump: meta/feature row mismatch");

    std::ofstream fs(features_path, std::ios::binary);
    if (!fs) throw std::runtime_error("cannot write feature dump: " + features_path);
    json header;
    header["n"] = batch.n();
    header["d"] = batch.dim();
    header["fields"] = json::array();
    for (const char* f : kFields) header["fields"].push_back(f);
    fs << header.dump() << "\n";
    for (int i = 0; i < batch.n(); ++i)
        for (int j = 0; j < batch.dim(); ++j)
            put_f32_le(fs, static_cast<float>(batch.features(i, j)));

    std::ofstream ms(meta_path);
    if (!ms) throw std::runtime_error("cannot write feature meta: " + meta_path);
    for (const RowMeta& m : batch.meta) {
        json row;
        row["sample_id"] = m.sample_id;
        row["view_index"] = m.view_index;
        row["dataset_id"] = m.dataset_id;
        row["subject_id"] = m.subject_id;
        row["glasses"] = m.glasses;
        row["mask"] = m.mask;
        row["pitch"] = m.label.pitch;
        row["yaw"] = m.label.yaw;
        row["flip"] = m.flipped;
        ms << row.dump() << "\n";
    }
}

FeatureBatch load_feature_dump(const std::string& features_path, const std::string& meta_path) {
    std::ifstream fs(features_path, std::ios::binary);
    if (!fs) throw std::runtime_error("cannot open feature dump: " + features_path);
    std::string header_line;
    if (!std::getline(fs, header_line)) throw std::runtime_error("feature dump missing header");
    const json header = json::parse(header_line);
    const int n = header.at("n").get<int>();
    const int d = header.at("d").get<int>();
    if (n < 0 || d <= 0) throw std::runtime_error("feature dump header invalid");

    FeatureBatch batch;
    batch.features.resize(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) batch.features(i, j) = get_f32_le(fs);

    std::ifstream ms(meta_path);
    if (!ms) throw std::runtime_error("cannot open feature meta: " + meta_path);
    std::string line;
    while (std::getline(ms, line)) {
        if (line.empty()) continue;
        const json row = json::parse(line);
        RowMeta m;
        m.sample_id = row.at("sample_id").get<int64_t>();
        m.view_index = row.at("view_index").get<int>();
        m.dataset_id = row.at("dataset_id").get<std::string>();
        m.subject_id = row.at("subject_id").get<std::string>();
        m.glasses = row.at("glasses").get<bool>();
        m.mask = row.at("mask").get<bool>();
        m.label.pitch = row.at("pitch").get<double>();
        m.label.yaw = row.at("yaw").get<double>();
        m.flipped = row.at("flip").get<bool>();
        batch.meta.push_back(std::move(m));
    }
    if (static_cast<int>(batch.meta.size()) != n)
        throw std::runtime_error("feature meta row count does not match header");
    return batch;
}

}  // namespace gazeforge
