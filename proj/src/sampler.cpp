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

#include "gazeforge/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "gazeforge/rng.hpp"
#include "json.hpp"

namespace gazeforge {

using nlohmann::json;

const SampleRecord* SampleRegistry::find(const std::string& sample_id) const {
    for (const auto& r : records)
        if (r.sample_id == sample_id) return &r;
    return nullptr;
}

SampleRegistry ingest(const std::vector<SampleRecord>& records, const GazeInterval& gaze_interval,
                      const GazeInterval& head_interval, IngestReport* report) {
    if (!gaze_interval.valid() || !head_interval.valid())
        throw std::invalid_argument("ingest: invalid interval");
    SampleRegistry out;
    IngestReport local;
    std::unordered_set<std::string> seen;
    for (const SampleRecord& r : records) {
        if (r.sample_id.empty() || r.dataset_id.empty() || !std::isfinite(r.gaze.pitch) ||
            !std::isfinite(r.gaze.yaw) || !std::isfinite(r.head_pitch) ||
            !std::isfinite(r.head_yaw)) {
            local.malformed.push_back("sample '" + r.sample_id + "': missing or non-finite field");
            continue;
        }
        if (!seen.insert(r.sample_id).second) {
            local.malformed.push_back("sample '" + r.sample_id + "': duplicate id");
            continue;
        }
        if (!gaze_interval.contains(r.gaze)) {
            ++local.dropped_gaze;
            continue;
        }
        if (!head_interval.contains({r.head_pitch, r.head_yaw})) {
            ++local.dropped_head;
            continue;
        }
        out.records.push_back(r);
        ++local.kept;
    }
    if (report) *report = std::move(local);
    return out;
}

std::vector<SampleRecord> load_manifest(const std::string& path,
                                        std::vector<std::string>* malformed) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open manifest: " + path);
    std::vector<SampleRecord> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            SampleRecord r;
            r.sample_id = j.at("sample_id").get<std::string>();
            r.dataset_id = j.at("dataset").get<std::string>();
            r.subject_id = j.value("subject", std::string{});
            r.gaze.pitch = j.at("pitch").get<double>();
            r.gaze.yaw = j.at("yaw").get<double>();
            r.head_pitch = j.value("head_pitch", 0.0);
            r.head_yaw = j.value("head_yaw", 0.0);
            r.glasses = j.value("glasses", false);
            r.mask = j.value("mask", false);
            r.image_path = j.value("image", std::string{});
            r.matte_path = j.value("matte", std::string{});
            r.landmarks_path = j.value("landmarks", std::string{});
            out.push_back(std::move(r));
        } catch (const std::exception& e) {
            if (malformed)
                malformed->push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void save_manifest(const std::string& path, const std::vector<SampleRecord>& records) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write manifest: " + path);
    for (const SampleRecord& r : records) {
        json j;
        j["sample_id"] = r.sample_id;
        j["dataset"] = r.dataset_id;
        j["subject"] = r.subject_id;
        j["pitch"] = r.gaze.pitch;
        j["yaw"] = r.gaze.yaw;
        j["head_pitch"] = r.head_pitch;
        j["head_yaw"] = r.head_yaw;
        j["glasses"] = r.glasses;
        j["mask"] = r.mask;
        if (!r.image_path.empty()) j["image"] = r.image_path;
        if (!r.matte_path.empty()) j["matte"] = r.matte_path;
        if (!r.landmarks_path.empty()) j["landmarks"] = r.landmarks_path;
        os << j.dump() << "\n";
    }
}

int linear_bin(const GazeAngles& gaze, const GridSpec& grid) {
    const auto [cp, cy] = discretize(gaze, grid);
    return cp * grid.n_yaw + cy;
}

EpochPlan plan_epoch(const SampleRegistry& registry, const GridSpec& grid,
                     const PlanParams& params) {
    if (!grid.valid()) throw std::invalid_argument("plan_epoch: invalid grid");
    if (params.quota < 1) throw std::invalid_argument("plan_epoch: quota must be >= 1");

    // Cell membership, in registry order. Dataset keys iterate sorted.
    std::map<std::string, std::vector<std::vector<int>>> cells;
    for (size_t idx = 0; idx < registry.records.size(); ++idx) {
        const SampleRecord& r = registry.records[idx];
        auto& grid_cells = cells[r.dataset_id];
        if (grid_cells.empty()) grid_cells.resize(grid.total_bins());
        grid_cells[linear_bin(r.gaze, grid)].push_back(static_cast<int>(idx));
    }

    if (params.policy == EmptyCellPolicy::Error) {
        std::string missing;
        for (const auto& [dataset, grid_cells] : cells)
            for (int b = 0; b < grid.total_bins(); ++b)
                if (grid_cells[b].empty())
                    missing += (missing.empty() ? "" : ", ") + dataset + ":" + std::to_string(b);
        if (!missing.empty())
            throw std::runtime_error("plan_epoch: empty (dataset, bin) cells: " + missing);
    }

    EpochPlan plan;
    int64_t draw_index = 0;
    for (const auto& [dataset, grid_cells] : cells) {
        const bool balanced = params.subject_balanced_datasets.count(dataset) != 0;
        for (int b = 0; b < grid.total_bins(); ++b) {
            const std::vector<int>& members = grid_cells[b];
            if (members.empty()) continue;  // policy == Skip
            Rng rng(mix64(params.seed, fnv1a(dataset), static_cast<uint64_t>(b),
                          static_cast<uint64_t>(params.epoch)));

            std::vector<int> picks;
            picks.reserve(params.quota);
            if (!balanced) {
                std::vector<int> perm = members;
                rng.shuffle(perm.data(), perm.size());
                for (int i = 0; i < params.quota; ++i) picks.push_back(perm[i % perm.size()]);
            } else {
                // Group members by subject; draws cycle subjects round-robin.
                std::map<std::string, std::vector<int>> by_subject;
                for (int idx : members) by_subject[registry.records[idx].subject_id].push_back(idx);
                std::vector<std::string> subjects;
                for (const auto& [s, _] : by_subject) subjects.push_back(s);
                rng.shuffle(subjects.data(), subjects.size());
                std::map<std::string, std::vector<int>> perms;
                std::map<std::string, size_t> cursor;
                for (const auto& s : subjects) {
                    perms[s] = by_subject[s];
                    rng.shuffle(perms[s].data(), perms[s].size());
                    cursor[s] = 0;
                }
                for (int i = 0; i < params.quota; ++i) {
                    const std::string& s = subjects[i % subjects.size()];
                    std::vector<int>& p = perms[s];
                    picks.push_back(p[cursor[s] % p.size()]);
                    ++cursor[s];
                }
            }

            for (int idx : picks) {
                plan.entries.push_back(
                    {registry.records[idx].sample_id, params.epoch, draw_index++});
            }
            plan.cell_counts[{dataset, b}] = static_cast<int64_t>(picks.size());
        }
    }
    return plan;
}

std::map<std::string, int64_t> subject_histogram(const EpochPlan& plan,
                                                 const SampleRegistry& registry) {
    std::map<std::string, std::string> subject_of;
    for (const SampleRecord& r : registry.records) subject_of[r.sample_id] = r.subject_id;
    std::map<std::string, int64_t> hist;
    for (const PlanEntry& e : plan.entries) {
        auto it = subject_of.find(e.sample_id);
        if (it == subject_of.end())
            throw std::runtime_error("subject_histogram: planned id not in registry: " +
                                     e.sample_id);
        ++hist[it->second];
    }
    return hist;
}

void save_plan(const std::string& path, const EpochPlan& plan) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write plan: " + path);
    for (const PlanEntry& e : plan.entries) {
        json j;
        j["sample_id"] = e.sample_id;
        j["epoch"] = e.epoch;
        j["draw_index"] = e.draw_index;
        os << j.dump() << "\n";
    }
}

EpochPlan load_plan(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open plan: " + path);
    EpochPlan plan;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        plan.entries.push_back({j.at("sample_id").get<std::string>(), j.at("epoch").get<int>(),
                                j.at("draw_index").get<int64_t>()});
    }
    return plan;
}

}  // namespace gazeforge
