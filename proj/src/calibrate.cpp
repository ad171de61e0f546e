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

#include "gazeforge/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gazeforge/csv.hpp"
#include "gazeforge/rng.hpp"
#include "json.hpp"

namespace gazeforge {

using nlohmann::json;

GazePointPair select_center_points(std::span<const GazePointPair> pairs, int k, Vec2 center) {
    if (k < 1) throw std::invalid_argument("select_center_points: k must be >= 1");
    if (static_cast<int>(pairs.size()) < k)
        throw std::invalid_argument("select_center_points: fewer pairs than k");
    std::vector<size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return (pairs[a].gt - center).norm() < (pairs[b].gt - center).norm();
    });
    GazePointPair mean;
    mean.sample_id = "center_average";
    for (int i = 0; i < k; ++i) {
        mean.pred = mean.pred + pairs[order[i]].pred;
        mean.gt = mean.gt + pairs[order[i]].gt;
    }
    mean.pred = mean.pred * (1.0 / k);
    mean.gt = mean.gt * (1.0 / k);
    return mean;
}

std::vector<GazePointPair> select_anchor_points(std::span<const GazePointPair> pairs,
                                                std::span<const Vec2> anchors, int k) {
    std::vector<GazePointPair> out;
    out.reserve(anchors.size());
    for (const Vec2& anchor : anchors) out.push_back(select_center_points(pairs, k, anchor));
    return out;
}

std::vector<Vec2> screen_anchors_from_extent(std::span<const GazePointPair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("screen_anchors_from_extent: no pairs");
    double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;
    for (const auto& p : pairs) {
        xmin = std::min(xmin, p.gt.x);
        xmax = std::max(xmax, p.gt.x);
        ymin = std::min(ymin, p.gt.y);
        ymax = std::max(ymax, p.gt.y);
    }
    const Vec2 center{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    return {center, {xmin, ymin}, {xmax, ymin}, {xmin, ymax}, {xmax, ymax}};
}

CalibrationModel fit_one_point(const GazePointPair& pair) {
    CalibrationModel m;
    m.intercept_x = pair.gt.x - pair.pred.x;
    m.intercept_y = pair.gt.y - pair.pred.y;
    return m;
}

namespace {

// OLS of gt on pred for one axis; falls back to intercept-only when the
// predictions have no spread.
void fit_axis(std::span<const GazePointPair> pairs, bool x_axis, double& slope, double& intercept,
              bool& fallback) {
    const size_t n = pairs.size();
    double mean_p = 0.0, mean_g = 0.0;
    for (const auto& p : pairs) {
        mean_p += x_axis ? p.pred.x : p.pred.y;
        mean_g += x_axis ? p.gt.x : p.gt.y;
    }
    mean_p /= n;
    mean_g /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : pairs) {
        const double dp = (x_axis ? p.pred.x : p.pred.y) - mean_p;
        const double dg = (x_axis ? p.gt.x : p.gt.y) - mean_g;
        sxx += dp * dp;
        sxy += dp * dg;
    }
    if (sxx < 1e-9) {
        slope = 1.0;
        intercept = mean_g - mean_p;
        fallback = true;
    } else {
        slope = sxy / sxx;
        intercept = mean_g - slope * mean_p;
    }
}

}  // namespace

CalibrationModel fit_npoint(std::span<const GazePointPair> pairs) {
    if (pairs.size() < 2) throw std::invalid_argument("fit_npoint: need >= 2 pairs");
    CalibrationModel m;
    fit_axis(pairs, true, m.slope_x, m.intercept_x, m.degenerate_fallback);
    fit_axis(pairs, false, m.slope_y, m.intercept_y, m.degenerate_fallback);
    return m;
}

Vec2 apply(const CalibrationModel& model, const Vec2& pred) {
    return {model.slope_x * pred.x + model.intercept_x,
            model.slope_y * pred.y + model.intercept_y};
}

CalibrationErrors evaluate_pairs(std::span<const GazePointPair> pairs,
                                 const CalibrationModel& model) {
    CalibrationErrors e;
    for (const auto& p : pairs) {
        const Vec2 corrected = apply(model, p.pred);
        const Vec2 d = corrected - p.gt;
        e.dx += std::abs(d.x);
        e.dy += std::abs(d.y);
        e.d2 += d.norm();
        ++e.count;
    }
    if (e.count) {
        e.dx /= e.count;
        e.dy /= e.count;
        e.d2 /= e.count;
    }
    return e;
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

MpiiProtocolResult mpii_protocol(const std::map<std::string, std::vector<GazePointPair>>& subjects,
                                 int n_c, int reps, uint64_t seed) {
    if (n_c < 1) throw std::invalid_argument("mpii_protocol: n_c must be >= 1");
    if (reps < 1) throw std::invalid_argument("mpii_protocol: reps must be >= 1");
    MpiiProtocolResult out;
    for (const auto& [subject, pairs] : subjects) {
        if (static_cast<int>(pairs.size()) <= n_c)
            throw std::invalid_argument("mpii_protocol: subject '" + subject +
                                        "' has too few pairs for n_c");
        std::vector<double> dxs, dys, d2s;
        for (int rep = 0; rep < reps; ++rep) {
            Rng rng(mix64(seed, fnv1a(subject), static_cast<uint64_t>(rep)));
            std::vector<size_t> order(pairs.size());
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(order.data(), order.size());

            std::vector<GazePointPair> calib, eval;
            for (size_t i = 0; i < order.size(); ++i)
                (static_cast<int>(i) < n_c ? calib : eval).push_back(pairs[order[i]]);

            const CalibrationModel model =
                n_c == 1 ? fit_one_point(calib.front()) : fit_npoint(calib);
            const CalibrationErrors e = evaluate_pairs(eval, model);
            dxs.push_back(e.dx);
            dys.push_back(e.dy);
            d2s.push_back(e.d2);
        }
        CalibrationErrors med;
        med.dx = median_of(dxs);
        med.dy = median_of(dys);
        med.d2 = median_of(d2s);
        med.count = pairs.size();
        out.per_subject[subject] = med;
    }
    if (!out.per_subject.empty()) {
        for (const auto& [_, e] : out.per_subject) {
            out.mean.dx += e.dx;
            out.mean.dy += e.dy;
            out.mean.d2 += e.d2;
        }
        const double n = static_cast<double>(out.per_subject.size());
        out.mean.dx /= n;
        out.mean.dy /= n;
        out.mean.d2 /= n;
        out.mean.count = out.per_subject.size();
    }
    return out;
}

std::vector<GazePointPair> load_point_pairs(const std::string& path) {
    CsvTable csv = load_csv(path);
    csv.require({"sample_id", "pred_x_mm", "pred_y_mm", "gt_x_mm", "gt_y_mm"});
    std::vector<GazePointPair> out;
    for (size_t r = 0; r < csv.rows.size(); ++r) {
        GazePointPair p;
        p.sample_id = csv.get(r, "sample_id");
        p.pred = {csv.get_double(r, "pred_x_mm"), csv.get_double(r, "pred_y_mm")};
        p.gt = {csv.get_double(r, "gt_x_mm"), csv.get_double(r, "gt_y_mm")};
        p.subject = csv.get_or(r, "subject", "");
        p.session = csv.get_or(r, "session", "");
        out.push_back(std::move(p));
    }
    return out;
}

std::string model_to_json(const CalibrationModel& model) {
    json j;
    j["slope_x"] = model.slope_x;
    j["intercept_x"] = model.intercept_x;
    j["slope_y"] = model.slope_y;
    j["intercept_y"] = model.intercept_y;
    j["degenerate_fallback"] = model.degenerate_fallback;
    return j.dump(2);
}

CalibrationModel model_from_json(const std::string& text) {
    const json j = json::parse(text);
    CalibrationModel m;
    m.slope_x = j.at("slope_x").get<double>();
    m.intercept_x = j.at("intercept_x").get<double>();
    m.slope_y = j.at("slope_y").get<double>();
    m.intercept_y = j.at("intercept_y").get<double>();
    m.degenerate_fallback = j.value("degenerate_fallback", false);
    return m;
}

}  // namespace gazeforge
