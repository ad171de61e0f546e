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

#include "gazeforge/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gazeforge {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

GazeInterval parse_interval(const json& j, const std::string& where) {
    check_keys(j, where, {"pitch_min", "pitch_max", "yaw_min", "yaw_max"});
    GazeInterval out{j.at("pitch_min").get<double>(), j.at("pitch_max").get<double>(),
                     j.at("yaw_min").get<double>(), j.at("yaw_max").get<double>()};
    if (!out.valid()) throw ConfigError(where + ": min must be below max on both axes");
    return out;
}

json interval_to_json(const GazeInterval& i) {
    return {{"pitch_min", i.pitch_min},
            {"pitch_max", i.pitch_max},
            {"yaw_min", i.yaw_min},
            {"yaw_max", i.yaw_max}};
}

std::vector<int> parse_id_list(const json& j) { return j.get<std::vector<int>>(); }

template <typename T>
void assign_if(const json& obj, const char* key, T& target) {
    if (obj.contains(key)) target = obj.at(key).get<T>();
}

}  // namespace

void RunConfig::validate() const {
    if (schema_version != 1) throw ConfigError("unsupported schema_version");
    if (!gaze_interval.valid() || !head_pose_interval.valid())
        throw ConfigError("invalid gaze or head-pose interval");
    if (bin_size_deg <= 0) throw ConfigError("bin size must be positive");
    grid();  // throws when the interval is not a multiple of the bin size
    if (sampling.quota_per_bin < 1) throw ConfigError("quota_per_bin must be >= 1");
    try {
        weights.validate();
        protocol.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (composite.softmax_tau <= 0) throw ConfigError("softmax_tau must be positive");
    if (screen.eye_distance_mm <= 0 || screen.pixel_pitch_mm <= 0)
        throw ConfigError("screen geometry values must be positive");
    if (landmarks.glasses_anchor_ids.size() != 4)
        throw ConfigError("glasses_anchor_ids must list exactly 4 ids");
    if (landmarks.mask_polygon_ids.size() < 3)
        throw ConfigError("mask_polygon_ids must list at least 3 ids");
}

RunConfig default_run_config() {
    RunConfig c;
    c.annotate_config = AnnotateConfig::defaults();
    // Left/right correspondences of every configured landmark id.
    const std::vector<std::pair<int, int>> pairs = {
        {33, 263},  {7, 249},   {163, 390}, {144, 373}, {145, 374}, {153, 380}, {154, 381},
        {155, 382}, {133, 362}, {173, 398}, {157, 384}, {158, 385}, {159, 386}, {160, 387},
        {161, 388}, {246, 466}, {70, 300},  {63, 293},  {105, 334}, {66, 296},  {107, 336},
        {55, 285},  {193, 417}, {245, 465}, {128, 357}, {121, 350}, {120, 349}, {119, 348},
        {118, 347}, {117, 346}, {111, 340}, {143, 372}, {126, 355}, {93, 323},  {58, 288},
        {136, 365}, {149, 378}};
    c.landmarks.flip_swap_pairs = pairs;
    return c;
}

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    check_keys(j, "config",
               {"schema_version", "seed", "gaze_interval", "head_pose_interval", "grid",
                "sampling", "loss", "augment", "annotate", "landmarks", "screen"});

    RunConfig c = default_run_config();
    try {
        assign_if(j, "schema_version", c.schema_version);
        assign_if(j, "seed", c.seed);
        if (j.contains("gaze_interval"))
            c.gaze_interval = parse_interval(j.at("gaze_interval"), "gaze_interval");
        if (j.contains("head_pose_interval"))
            c.head_pose_interval = parse_interval(j.at("head_pose_interval"), "head_pose_interval");

        if (j.contains("grid")) {
            const json& g = j.at("grid");
            check_keys(g, "grid", {"bin_size_deg"});
            assign_if(g, "bin_size_deg", c.bin_size_deg);
        }

        if (j.contains("sampling")) {
            const json& s = j.at("sampling");
            check_keys(s, "sampling",
                       {"quota_per_bin", "subject_balanced_datasets", "empty_cell_policy"});
            assign_if(s, "quota_per_bin", c.sampling.quota_per_bin);
            if (s.contains("subject_balanced_datasets")) {
                c.sampling.subject_balanced_datasets.clear();
                for (const auto& d : s.at("subject_balanced_datasets"))
                    c.sampling.subject_balanced_datasets.insert(d.get<std::string>());
            }
            if (s.contains("empty_cell_policy")) {
                const std::string p = s.at("empty_cell_policy").get<std::string>();
                if (p == "error")
                    c.sampling.empty_cell_policy = EmptyCellPolicy::Error;
                else if (p == "skip")
                    c.sampling.empty_cell_policy = EmptyCellPolicy::Skip;
                else
                    throw ConfigError("sampling.empty_cell_policy must be 'error' or 'skip'");
            }
        }

        if (j.contains("loss")) {
            const json& l = j.at("loss");
            check_keys(l, "loss",
                       {"lambda_clf", "lambda_seg", "lambda_d", "lambda_phi", "lambda_g",
                        "lambda_m", "tau_supcon", "softmax_tau", "pitch_attenuated_datasets"});
            assign_if(l, "lambda_clf", c.weights.lambda_clf);
            assign_if(l, "lambda_seg", c.weights.lambda_seg);
            assign_if(l, "lambda_d", c.weights.lambda_D);
            assign_if(l, "lambda_phi", c.weights.lambda_phi);
            assign_if(l, "lambda_g", c.weights.lambda_g);
            assign_if(l, "lambda_m", c.weights.lambda_m);
            assign_if(l, "tau_supcon", c.weights.tau_S);
            assign_if(l, "softmax_tau", c.composite.softmax_tau);
            if (l.contains("pitch_attenuated_datasets")) {
                c.composite.pitch_attenuated_datasets.clear();
                for (const auto& d : l.at("pitch_attenuated_datasets"))
                    c.composite.pitch_attenuated_datasets.insert(d.get<std::string>());
            }
        }

        if (j.contains("augment")) {
            const json& a = j.at("augment");
            check_keys(a, "augment", {"probabilities", "views_per_sample", "ranges"});
            if (a.contains("probabilities")) {
                const json& p = a.at("probabilities");
                check_keys(p, "augment.probabilities",
                           {"color_jitter", "background", "illumination", "sensor_noise",
                            "glasses", "mask", "blur", "desaturation"});
                assign_if(p, "color_jitter", c.protocol.p_color_jitter);
                assign_if(p, "background", c.protocol.p_background);
                assign_if(p, "illumination", c.protocol.p_illumination);
                assign_if(p, "sensor_noise", c.protocol.p_sensor_noise);
                assign_if(p, "glasses", c.protocol.p_glasses);
                assign_if(p, "mask", c.protocol.p_mask);
                assign_if(p, "blur", c.protocol.p_blur);
                assign_if(p, "desaturation", c.protocol.p_desaturation);
            }
            assign_if(a, "views_per_sample", c.protocol.views_per_sample);
            if (a.contains("ranges")) {
                const json& r = a.at("ranges");
                check_keys(r, "augment.ranges",
                           {"jitter_gain_min", "jitter_gain_max", "jitter_brightness",
                            "noise_alpha_y", "noise_alpha_c", "noise_blotch", "illum_opacity_min",
                            "illum_opacity_max", "glasses_scale_min", "glasses_scale_max",
                            "glasses_opacity_min", "glasses_opacity_max", "reflection_opacity_min",
                            "reflection_opacity_max", "frame_color_strength_max",
                            "mask_solid_prob", "blur_sigma_min", "blur_sigma_max", "desat_min",
                            "desat_max"});
                assign_if(r, "jitter_gain_min", c.protocol.jitter_gain_min);
                assign_if(r, "jitter_gain_max", c.protocol.jitter_gain_max);
                assign_if(r, "jitter_brightness", c.protocol.jitter_brightness);
                assign_if(r, "noise_alpha_y", c.protocol.noise_alpha_y);
                assign_if(r, "noise_alpha_c", c.protocol.noise_alpha_c);
                assign_if(r, "noise_blotch", c.protocol.noise_blotch);
                assign_if(r, "illum_opacity_min", c.protocol.illum_opacity_min);
                assign_if(r, "illum_opacity_max", c.protocol.illum_opacity_max);
                assign_if(r, "glasses_scale_min", c.protocol.glasses_scale_min);
                assign_if(r, "glasses_scale_max", c.protocol.glasses_scale_max);
                assign_if(r, "glasses_opacity_min", c.protocol.glasses_opacity_min);
                assign_if(r, "glasses_opacity_max", c.protocol.glasses_opacity_max);
                assign_if(r, "reflection_opacity_min", c.protocol.reflection_opacity_min);
                assign_if(r, "reflection_opacity_max", c.protocol.reflection_opacity_max);
                assign_if(r, "frame_color_strength_max", c.protocol.frame_color_strength_max);
                assign_if(r, "mask_solid_prob", c.protocol.mask_solid_prob);
                assign_if(r, "blur_sigma_min", c.protocol.blur_sigma_min);
                assign_if(r, "blur_sigma_max", c.protocol.blur_sigma_max);
                assign_if(r, "desat_min", c.protocol.desat_min);
                assign_if(r, "desat_max", c.protocol.desat_max);
            }
        }

        if (j.contains("annotate")) {
            const json& a = j.at("annotate");
            check_keys(a, "annotate",
                       {"ref_width", "crop_margin", "iou_threshold", "eye_region_ids_left",
                        "eye_region_ids_right", "inner_eye_ids_left", "inner_eye_ids_right"});
            assign_if(a, "ref_width", c.annotate_config.ref_width);
            assign_if(a, "crop_margin", c.annotate_config.crop_margin);
            assign_if(a, "iou_threshold", c.annotate_config.iou_threshold);
            if (a.contains("eye_region_ids_left"))
                c.annotate_config.eye_region_ids_left = parse_id_list(a.at("eye_region_ids_left"));
            if (a.contains("eye_region_ids_right"))
                c.annotate_config.eye_region_ids_right =
                    parse_id_list(a.at("eye_region_ids_right"));
            if (a.contains("inner_eye_ids_left"))
                c.annotate_config.inner_eye_ids_left = parse_id_list(a.at("inner_eye_ids_left"));
            if (a.contains("inner_eye_ids_right"))
                c.annotate_config.inner_eye_ids_right = parse_id_list(a.at("inner_eye_ids_right"));
        }

        if (j.contains("landmarks")) {
            const json& l = j.at("landmarks");
            check_keys(l, "landmarks",
                       {"glasses_anchor_ids", "mask_polygon_ids", "flip_swap_pairs"});
            if (l.contains("glasses_anchor_ids"))
                c.landmarks.glasses_anchor_ids = parse_id_list(l.at("glasses_anchor_ids"));
            if (l.contains("mask_polygon_ids"))
                c.landmarks.mask_polygon_ids = parse_id_list(l.at("mask_polygon_ids"));
            if (l.contains("flip_swap_pairs")) {
                c.landmarks.flip_swap_pairs.clear();
                for (const auto& p : l.at("flip_swap_pairs")) {
                    if (!p.is_array() || p.size() != 2)
                        throw ConfigError("landmarks.flip_swap_pairs entries must be [a, b]");
                    c.landmarks.flip_swap_pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
                }
            }
        }

        if (j.contains("screen")) {
            const json& s = j.at("screen");
            check_keys(s, "screen", {"camera_offset_mm", "eye_distance_mm", "pixel_pitch_mm"});
            if (s.contains("camera_offset_mm")) {
                const auto& o = s.at("camera_offset_mm");
                if (!o.is_array() || o.size() != 2)
                    throw ConfigError("screen.camera_offset_mm must be [x, y]");
                c.screen.camera_offset_mm = {o[0].get<double>(), o[1].get<double>()};
            }
            assign_if(s, "eye_distance_mm", c.screen.eye_distance_mm);
            assign_if(s, "pixel_pitch_mm", c.screen.pixel_pitch_mm);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field has the wrong type: ") + e.what());
    }

    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_run_config(ss.str());
}

std::string run_config_to_json(const RunConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["seed"] = c.seed;
    j["gaze_interval"] = interval_to_json(c.gaze_interval);
    j["head_pose_interval"] = interval_to_json(c.head_pose_interval);
    j["grid"] = {{"bin_size_deg", c.bin_size_deg}};
    j["sampling"] = {
        {"quota_per_bin", c.sampling.quota_per_bin},
        {"subject_balanced_datasets", c.sampling.subject_balanced_datasets},
        {"empty_cell_policy",
         c.sampling.empty_cell_policy == EmptyCellPolicy::Error ? "error" : "skip"}};
    j["loss"] = {{"lambda_clf", c.weights.lambda_clf},
                 {"lambda_seg", c.weights.lambda_seg},
                 {"lambda_d", c.weights.lambda_D},
                 {"lambda_phi", c.weights.lambda_phi},
                 {"lambda_g", c.weights.lambda_g},
                 {"lambda_m", c.weights.lambda_m},
                 {"tau_supcon", c.weights.tau_S},
                 {"softmax_tau", c.composite.softmax_tau},
                 {"pitch_attenuated_datasets", c.composite.pitch_attenuated_datasets}};
    j["augment"] = {{"probabilities",
                     {{"color_jitter", c.protocol.p_color_jitter},
                      {"background", c.protocol.p_background},
                      {"illumination", c.protocol.p_illumination},
                      {"sensor_noise", c.protocol.p_sensor_noise},
                      {"glasses", c.protocol.p_glasses},
                      {"mask", c.protocol.p_mask},
                      {"blur", c.protocol.p_blur},
                      {"desaturation", c.protocol.p_desaturation}}},
                    {"views_per_sample", c.protocol.views_per_sample},
                    {"ranges",
                     {{"jitter_gain_min", c.protocol.jitter_gain_min},
                      {"jitter_gain_max", c.protocol.jitter_gain_max},
                      {"jitter_brightness", c.protocol.jitter_brightness},
                      {"noise_alpha_y", c.protocol.noise_alpha_y},
                      {"noise_alpha_c", c.protocol.noise_alpha_c},
                      {"noise_blotch", c.protocol.noise_blotch},
                      {"illum_opacity_min", c.protocol.illum_opacity_min},
                      {"illum_opacity_max", c.protocol.illum_opacity_max},
                      {"glasses_scale_min", c.protocol.glasses_scale_min},
                      {"glasses_scale_max", c.protocol.glasses_scale_max},
                      {"glasses_opacity_min", c.protocol.glasses_opacity_min},
                      {"glasses_opacity_max", c.protocol.glasses_opacity_max},
                      {"reflection_opacity_min", c.protocol.reflection_opacity_min},
                      {"reflection_opacity_max", c.protocol.reflection_opacity_max},
                      {"frame_color_strength_max", c.protocol.frame_color_strength_max},
                      {"mask_solid_prob", c.protocol.mask_solid_prob},
                      {"blur_sigma_min", c.protocol.blur_sigma_min},
                      {"blur_sigma_max", c.protocol.blur_sigma_max},
                      {"desat_min", c.protocol.desat_min},
                      {"desat_max", c.protocol.desat_max}}}};
    j["annotate"] = {{"ref_width", c.annotate_config.ref_width},
                     {"crop_margin", c.annotate_config.crop_margin},
                     {"iou_threshold", c.annotate_config.iou_threshold},
                     {"eye_region_ids_left", c.annotate_config.eye_region_ids_left},
                     {"eye_region_ids_right", c.annotate_config.eye_region_ids_right},
                     {"inner_eye_ids_left", c.annotate_config.inner_eye_ids_left},
                     {"inner_eye_ids_right", c.annotate_config.inner_eye_ids_right}};
    json pairs = json::array();
    for (const auto& [a, b] : c.landmarks.flip_swap_pairs) pairs.push_back({a, b});
    j["landmarks"] = {{"glasses_anchor_ids", c.landmarks.glasses_anchor_ids},
                      {"mask_polygon_ids", c.landmarks.mask_polygon_ids},
                      {"flip_swap_pairs", pairs}};
    j["screen"] = {
        {"camera_offset_mm", {c.screen.camera_offset_mm.x, c.screen.camera_offset_mm.y}},
        {"eye_distance_mm", c.screen.eye_distance_mm},
        {"pixel_pitch_mm", c.screen.pixel_pitch_mm}};
    return j.dump(2);
}

}  // namespace gazeforge
