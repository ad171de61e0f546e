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

#include "gazeforge/evalbench.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gazeforge/csv.hpp"

namespace gazeforge {

bool session_tag_valid(char session) { return session >= 'a' && session <= 'i'; }

std::vector<std::string> group_names() {
    return {"Overall", "Ideal", "Side-Lit", "Glasses", "Masks"};
}

std::vector<char> group_sessions(const std::string& group) {
    if (group == "Overall") return {};
    if (group == "Ideal") return {'a', 'b'};
    if (group == "Side-Lit") return {'c', 'd'};
    if (group == "Glasses") return {'e', 'f'};
    if (group == "Masks") return {'g', 'h'};
    throw std::invalid_argument("unknown session group: " + group);
}

void clamp_predictions(std::vector<PredictionRecord>& records, const GazeInterval& interval) {
    for (auto& r : records)
        if (r.pred_gaze) r.pred_gaze = clamp_to_interval(*r.pred_gaze, interval);
}

ScreenErrors screen_errors(std::span<const PredictionRecord> records) {
    ScreenErrors e;
    for (const auto& r : records) {
        if (!r.pred_pog || !r.gt_pog) continue;
        const Vec2 d = *r.pred_pog - *r.gt_pog;
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

AngularErrors angular_errors(std::span<const PredictionRecord> records) {
    AngularErrors e;
    for (const auto& r : records) {
        if (!r.pred_gaze || !r.gt_gaze) continue;
        e.d += angular_error_deg(angles_to_vector(*r.pred_gaze), angles_to_vector(*r.gt_gaze));
        e.d_pitch += std::abs(r.pred_gaze->pitch - r.gt_gaze->pitch);
        e.d_yaw += std::abs(r.pred_gaze->yaw - r.gt_gaze->yaw);
        ++e.count;
    }
    if (e.count) {
        e.d /= e.count;
        e.d_pitch /= e.count;
        e.d_yaw /= e.count;
    }
    return e;
}

GroupReport group_report(std::span<const PredictionRecord> records,
                         bool exclude_reduced_subjects) {
    for (const auto& r : records) {
        if (r.session.size() != 1 || !session_tag_valid(r.session[0]))
            throw std::invalid_argument("group_report: unknown session tag '" + r.session + "'");
    }

    // Subjects covering all of a..h count as full-protocol subjects.
    std::set<std::string> reduced;
    if (exclude_reduced_subjects) {
        std::map<std::string, std::set<char>> sessions_of;
        for (const auto& r : records) sessions_of[r.subject].insert(r.session[0]);
        for (const auto& [subject, sessions] : sessions_of) {
            bool full = true;
            for (char s = 'a'; s <= 'h'; ++s) full = full && sessions.count(s);
            if (!full) reduced.insert(subject);
        }
    }

    GroupReport report;
    for (const std::string& group : group_names()) {
        const std::vector<char> members = group_sessions(group);
        std::vector<PredictionRecord> subset;
        for (const auto& r : records) {
            const bool in_group =
                members.empty() ||
                std::find(members.begin(), members.end(), r.session[0]) != members.end();
            if (!in_group) continue;
            if (!members.empty() && exclude_reduced_subjects && reduced.count(r.subject)) continue;
            subset.push_back(r);
        }
        GroupRow row;
        row.group = group;
        row.errors = screen_errors(subset);
        row.present = row.errors.count > 0;
        if (!row.present) report.notes.push_back("group '" + group + "' has no records; omitted");
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string GroupReport::to_csv() const {
    std::ostringstream os;
    os << "group,count,d_x_mm,d_y_mm,d_euclid_mm\n";
    os.setf(std::ios::fixed);
    os.precision(6);
    for (const auto& row : rows) {
        if (!row.present) continue;
        os << row.group << "," << row.errors.count << "," << row.errors.dx << "," << row.errors.dy
           << "," << row.errors.d2 << "\n";
    }
    return os.str();
}

std::string GroupReport::to_text() const {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "group      count       d_X       d_Y     ||d||\n";
    for (const auto& row : rows) {
        if (!row.present) continue;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%-10s %5zu %9.2f %9.2f %9.2f\n", row.group.c_str(),
                      row.errors.count, row.errors.dx, row.errors.dy, row.errors.d2);
        os << buf;
    }
    for (const auto& note : notes) os << "# " << note << "\n";
    return os.str();
}

std::map<std::string, ViewBias> zerogaze_stats(std::span<const PredictionRecord> records) {
    std::map<std::string, std::vector<GazeAngles>> by_view;
    for (const auto& r : records)
        if (r.pred_gaze) by_view[r.view].push_back(*r.pred_gaze);

    std::map<std::string, ViewBias> out;
    for (const auto& [view, preds] : by_view) {
        ViewBias b;
        b.count = preds.size();
        for (const auto& p : preds) {
            b.mean_pitch += p.pitch;
            b.mean_yaw += p.yaw;
        }
        b.mean_pitch /= b.count;
        b.mean_yaw /= b.count;
        std::vector<double> radii;
        radii.reserve(preds.size());
        for (const auto& p : preds) {
            b.std_pitch += (p.pitch - b.mean_pitch) * (p.pitch - b.mean_pitch);
            b.std_yaw += (p.yaw - b.mean_yaw) * (p.yaw - b.mean_yaw);
            radii.push_back(std::sqrt(p.pitch * p.pitch + p.yaw * p.yaw));
        }
        b.std_pitch = std::sqrt(b.std_pitch / b.count);
        b.std_yaw = std::sqrt(b.std_yaw / b.count);
        std::sort(radii.begin(), radii.end());
        const size_t rank =
            std::min(radii.size() - 1,
                     static_cast<size_t>(std::ceil(0.95 * static_cast<double>(radii.size()))) - 1);
        b.p95_radius = radii[rank];
        out[view] = b;
    }
    return out;
}

PoseFilterResult pose_filter(std::span<const PredictionRecord> records, double pitch_tol,
                             double other_tol) {
    std::map<std::string, std::vector<const PredictionRecord*>> triplets;
    for (const auto& r : records) triplets[r.triplet_id].push_back(&r);

    const std::set<std::string> wanted = {"clean", "glasses", "mask"};
    PoseFilterResult out;
    for (const auto& [id, members] : triplets) {
        std::set<std::string> views;
        for (const auto* r : members) views.insert(r->view);
        if (views != wanted || members.size() != 3) {
            ++out.dropped_incomplete;
            continue;
        }
        bool ok = true;
        for (const auto* r : members) {
            if (!r->head_pose) {
                ok = false;
                break;
            }
            const auto& hp = *r->head_pose;
            if (!(std::abs(hp[0]) < pitch_tol && std::abs(hp[1]) < other_tol &&
                  std::abs(hp[2]) < other_tol)) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            ++out.dropped_pose;
            continue;
        }
        for (const auto* r : members) out.retained.push_back(*r);
    }
    return out;
}

std::vector<PredictionRecord> load_prediction_records(const std::string& path) {
    CsvTable csv = load_csv(path);
    csv.require({"sample_id"});
    std::vector<PredictionRecord> out;
    for (size_t r = 0; r < csv.rows.size(); ++r) {
        PredictionRecord rec;
        rec.sample_id = csv.get(r, "sample_id");
        rec.subject = csv.get_or(r, "subject", "");
        rec.session = csv.get_or(r, "session", "");
        rec.view = csv.get_or(r, "view", "");
        rec.triplet_id = csv.get_or(r, "triplet_id", rec.sample_id);
        if (csv.has("pred_x_mm") && csv.has("pred_y_mm"))
            rec.pred_pog = Vec2{csv.get_double(r, "pred_x_mm"), csv.get_double(r, "pred_y_mm")};
        if (csv.has("gt_x_mm") && csv.has("gt_y_mm"))
            rec.gt_pog = Vec2{csv.get_double(r, "gt_x_mm"), csv.get_double(r, "gt_y_mm")};
        if (csv.has("pred_pitch") && csv.has("pred_yaw"))
            rec.pred_gaze =
                GazeAngles{csv.get_double(r, "pred_pitch"), csv.get_double(r, "pred_yaw")};
        if (csv.has("gt_pitch") && csv.has("gt_yaw"))
            rec.gt_gaze = GazeAngles{csv.get_double(r, "gt_pitch"), csv.get_double(r, "gt_yaw")};
        if (csv.has("head_pitch") && csv.has("head_yaw") && csv.has("head_roll"))
            rec.head_pose = std::array<double, 3>{csv.get_double(r, "head_pitch"),
                                                  csv.get_double(r, "head_yaw"),
                                                  csv.get_double(r, "head_roll")};
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace gazeforge
