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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "doctest.h"
#include "gazeforge/sampler.hpp"
#include "testutil.hpp"

using namespace gazeforge;

namespace {

const GazeInterval kGaze{-30.0, 14.0, -26.0, 26.0};
const GazeInterval kHead{-30.0, 30.0, -30.0, 30.0};

SampleRecord rec(const std::string& id, const std::string& dataset, const std::string& subject,
                 double pitch, double yaw, double hp = 0.0, double hy = 0.0) {
    SampleRecord r;
    r.sample_id = id;
    r.dataset_id = dataset;
    r.subject_id = subject;
    r.gaze = {pitch, yaw};
    r.head_pitch = hp;
    r.head_yaw = hy;
    return r;
}

// Registry whose every (dataset, bin) cell of the given grid is populated.
SampleRegistry full_registry(const GridSpec& grid, const std::vector<std::string>& datasets,
                             int per_cell, Rng& rng) {
    std::vector<SampleRecord> records;
    int counter = 0;
    for (const auto& ds : datasets)
        for (int p = 0; p < grid.n_pitch; ++p)
            for (int y = 0; y < grid.n_yaw; ++y)
                for (int k = 0; k < per_cell; ++k) {
                    const double pitch = centroid(p, Axis::Pitch, grid) +
                                         rng.uniform(-1.9, 1.9);
                    const double yaw = centroid(y, Axis::Yaw, grid) + rng.uniform(-1.9, 1.9);
                    records.push_back(rec("s" + std::to_string(counter++), ds,
                                          "subj" + std::to_string(counter % 7), pitch, yaw));
                }
    IngestReport report;
    SampleRegistry reg = ingest(records, kGaze, kHead, &report);
    REQUIRE(report.malformed.empty());
    REQUIRE(report.kept == records.size());
    return reg;
}

}  // namespace

TEST_CASE("ingest: drops records outside the gaze and head-pose intervals") {
    std::vector<SampleRecord> records = {
        rec("a", "X", "s1", 20.0, 0.0),          // pitch above 14
        rec("b", "X", "s1", 0.0, 0.0, 35.0),     // head pitch above 30
        rec("c", "X", "s1", 0.0, 0.0),           // in range
        rec("d", "X", "s1", -30.0, 26.0),        // boundary inclusive
    };
    IngestReport report;
    const SampleRegistry reg = ingest(records, kGaze, kHead, &report);
    CHECK(reg.records.size() == 2);
    CHECK(report.kept == 2);
    CHECK(report.dropped_gaze == 1);
    CHECK(report.dropped_head == 1);
}

TEST_CASE("ingest: malformed and duplicate records listed, not fatal") {
    std::vector<SampleRecord> records = {
        rec("a", "X", "s1", 0.0, 0.0),
        rec("a", "X", "s1", 1.0, 1.0),  // duplicate id
        rec("", "X", "s1", 0.0, 0.0),   // missing id
    };
    SampleRecord nan = rec("n", "X", "s1", 0.0, 0.0);
    nan.gaze.pitch = std::nan("");
    records.push_back(nan);
    IngestReport report;
    const SampleRegistry reg = ingest(records, kGaze, kHead, &report);
    CHECK(reg.records.size() == 1);
    CHECK(report.malformed.size() == 3);
}

TEST_CASE("plan_epoch: toy grid draws cycle underfull cells") {
    // One-bin pitch, two-bin yaw grid; cells of size 5 and 2 with quota 3.
    const GridSpec grid = GridSpec::from_bin_size({-2.0, 2.0, -4.0, 4.0}, 4.0);
    std::vector<SampleRecord> records;
    for (int i = 0; i < 5; ++i)
        records.push_back(rec("l" + std::to_string(i), "X", "s", 0.0, -2.0));
    records.push_back(rec("r0", "X", "s", 0.0, 2.0));
    records.push_back(rec("r1", "X", "s", 0.0, 2.0));
    IngestReport report;
    const SampleRegistry reg = ingest(records, {-2, 2, -4, 4}, kHead, &report);

    PlanParams params;
    params.quota = 3;
    params.seed = 99;
    const EpochPlan plan = plan_epoch(reg, grid, params);
    CHECK(plan.entries.size() == 6);

    std::map<std::string, int> counts;
    for (const auto& e : plan.entries) counts[e.sample_id]++;
    // The 2-member cell must contain one id twice and the other once.
    const int c0 = counts["r0"], c1 = counts["r1"];
    CHECK(c0 + c1 == 3);
    CHECK(std::max(c0, c1) == 2);
    CHECK(std::min(c0, c1) == 1);
    // The 5-member cell draws three distinct ids.
    int left_total = 0;
    for (int i = 0; i < 5; ++i) {
        CHECK(counts["l" + std::to_string(i)] <= 1);
        left_total += counts["l" + std::to_string(i)];
    }
    CHECK(left_total == 3);
}

TEST_CASE("plan_epoch: deterministic for a fixed seed, different across seeds") {
    Rng rng(1);
    const GridSpec grid = GridSpec::from_bin_size({-8.0, 0.0, -4.0, 4.0}, 4.0);
    const SampleRegistry reg = full_registry(grid, {"X", "N"}, 9, rng);
    PlanParams params;
    params.quota = 5;
    params.seed = 1234;
    const EpochPlan a = plan_epoch(reg, grid, params);
    const EpochPlan b = plan_epoch(reg, grid, params);
    REQUIRE(a.entries.size() == b.entries.size());
    for (size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].sample_id == b.entries[i].sample_id);
        CHECK(a.entries[i].draw_index == b.entries[i].draw_index);
    }
    params.seed = 4321;
    const EpochPlan c = plan_epoch(reg, grid, params);
    bool any_different = false;
    for (size_t i = 0; i < a.entries.size(); ++i)
        any_different = any_different || a.entries[i].sample_id != c.entries[i].sample_id;
    CHECK(any_different);
}

TEST_CASE("plan_epoch: exact quota per cell on random registries") {
    Rng rng(2);
    const GridSpec grid = GridSpec::from_bin_size({-8.0, 0.0, -8.0, 8.0}, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int per_cell = 1 + static_cast<int>(rng.bounded(6));
        const SampleRegistry reg = full_registry(grid, {"X", "N", "C"}, per_cell, rng);
        PlanParams params;
        params.quota = 4;
        params.seed = rng.next_u64();
        const EpochPlan plan = plan_epoch(reg, grid, params);
        CHECK(plan.entries.size() ==
              static_cast<size_t>(3 * grid.total_bins() * params.quota));
        for (const auto& [cell, count] : plan.cell_counts) CHECK(count == params.quota);
        // Every planned id resolves in the registry.
        const auto hist = subject_histogram(plan, reg);
        int64_t total = 0;
        for (const auto& [_, c] : hist) total += c;
        CHECK(total == static_cast<int64_t>(plan.entries.size()));
    }
}

TEST_CASE("plan_epoch: empty cell raises under policy=error, skipped otherwise") {
    const GridSpec grid = GridSpec::from_bin_size({-4.0, 4.0, -4.0, 4.0}, 4.0);
    std::vector<SampleRecord> records = {rec("a", "X", "s", -2.0, -2.0)};
    IngestReport report;
    const SampleRegistry reg = ingest(records, {-4, 4, -4, 4}, kHead, &report);
    PlanParams params;
    params.quota = 2;
    CHECK_THROWS_AS(plan_epoch(reg, grid, params), std::runtime_error);
    params.policy = EmptyCellPolicy::Skip;
    const EpochPlan plan = plan_epoch(reg, grid, params);
    CHECK(plan.entries.size() == 2);  // only the populated cell
}

TEST_CASE("subject balancing: round-robin counts within each cell") {
    const GridSpec grid = GridSpec::from_bin_size({-2.0, 2.0, -2.0, 2.0}, 4.0);

    auto run = [&](int quota, int n_subjects, int per_subject) {
        std::vector<SampleRecord> records;
        int id = 0;
        for (int s = 0; s < n_subjects; ++s)
            for (int k = 0; k < per_subject; ++k)
                records.push_back(
                    rec("x" + std::to_string(id++), "C", "subj" + std::to_string(s), 0.0, 0.0));
        IngestReport report;
        const SampleRegistry reg = ingest(records, {-2, 2, -2, 2}, kHead, &report);
        PlanParams params;
        params.quota = quota;
        params.seed = 7;
        params.subject_balanced_datasets = {"C"};
        const EpochPlan plan = plan_epoch(reg, grid, params);
        std::map<std::string, int64_t> hist = subject_histogram(plan, reg);
        return hist;
    };

    const auto even = run(6, 3, 4);
    for (const auto& [_, count] : even) CHECK(count == 2);

    const auto uneven = run(7, 3, 4);
    std::vector<int64_t> counts;
    for (const auto& [_, c] : uneven) counts.push_back(c);
    std::sort(counts.begin(), counts.end());
    CHECK(counts == std::vector<int64_t>{2, 2, 3});

    const auto single = run(5, 1, 2);
    REQUIRE(single.size() == 1);
    CHECK(single.begin()->second == 5);
}

TEST_CASE("plan and manifest JSONL round-trips") {
    gftest::TempDir dir("sampler");
    std::vector<SampleRecord> records = {rec("a", "X", "s1", 0.0, 0.0, 1.0, -2.0),
                                         rec("b", "N", "s2", -5.0, 3.0)};
    records[0].image_path = "img/a.png";
    records[0].glasses = true;
    save_manifest(dir.file("m.jsonl"), records);
    std::vector<std::string> malformed;
    const auto back = load_manifest(dir.file("m.jsonl"), &malformed);
    REQUIRE(back.size() == 2);
    CHECK(malformed.empty());
    CHECK(back[0].sample_id == "a");
    CHECK(back[0].image_path == "img/a.png");
    CHECK(back[0].glasses);
    CHECK(back[1].gaze.pitch == doctest::Approx(-5.0));

    const GridSpec grid = GridSpec::from_bin_size({-30, 14, -26, 26}, 4.0);
    IngestReport report;
    const SampleRegistry reg = ingest(records, kGaze, kHead, &report);
    PlanParams params;
    params.quota = 2;
    params.policy = EmptyCellPolicy::Skip;
    const EpochPlan plan = plan_epoch(reg, grid, params);
    save_plan(dir.file("p.jsonl"), plan);
    const EpochPlan loaded = load_plan(dir.file("p.jsonl"));
    REQUIRE(loaded.entries.size() == plan.entries.size());
    for (size_t i = 0; i < plan.entries.size(); ++i) {
        CHECK(loaded.entries[i].sample_id == plan.entries[i].sample_id);
        CHECK(loaded.entries[i].draw_index == plan.entries[i].draw_index);
    }
}

TEST_CASE("load_manifest: malformed lines are reported and skipped") {
    gftest::TempDir dir("manifest");
    {
        std::ofstream os(dir.file("bad.jsonl"));
        os << R"({"sample_id":"ok","dataset":"X","pitch":0.0,"yaw":0.0})" << "\n";
        os << "not json at all\n";
        os << R"({"sample_id":"missing_pitch","dataset":"X","yaw":0.0})" << "\n";
    }
    std::vector<std::string> malformed;
    const auto records = load_manifest(dir.file("bad.jsonl"), &malformed);
    CHECK(records.size() == 1);
    CHECK(malformed.size() == 2);
}
