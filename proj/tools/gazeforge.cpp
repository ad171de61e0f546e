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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "gazeforge/annotate.hpp"
#include "gazeforge/augment.hpp"
#include "gazeforge/calibrate.hpp"
#include "gazeforge/config.hpp"
#include "gazeforge/evalbench.hpp"
#include "gazeforge/featureio.hpp"
#include "gazeforge/png_io.hpp"
#include "gazeforge/sampler.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gazeforge;

namespace {

// Exit codes: 0 ok, 1 usage, 2 config schema violation, 3 missing file,
// 4 data/invariant violation, 5 internal error, 6 empty input.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitMissingFile = 3;
constexpr int kExitInvariant = 4;
constexpr int kExitInternal = 5;
constexpr int kExitEmpty = 6;

struct MissingFile : std::runtime_error {
    explicit MissingFile(const std::string& path)
        : std::runtime_error("missing file: " + path) {}
};

struct EmptyInput : std::runtime_error {
    explicit EmptyInput(const std::string& what) : std::runtime_error(what) {}
};

void require_file(const std::string& path) {
    if (!fs::exists(path)) throw MissingFile(path);
}

struct GlobalOpts {
    std::string config_path;
    bool json_output = false;
};

RunConfig load_config_or_default(const GlobalOpts& g) {
    std::string path = g.config_path;
    if (path.empty()) {
        const char* env = std::getenv("GAZEFORGE_CONFIG");
        if (env && *env) path = env;
    }
    if (path.empty()) return default_run_config();
    require_file(path);
    return load_run_config(path);
}

void emit(const GlobalOpts& g, const json& machine, const std::string& human) {
    if (g.json_output) {
        json out = machine;
        out["schema_version"] = 1;
        std::cout << out.dump() << "\n";
    } else {
        std::cout << human;
    }
}

std::string resolve_relative(const std::string& base_file, const std::string& path) {
    if (path.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base_file).parent_path() / path).string();
}

LandmarkSet load_landmarks_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw MissingFile(path);
    const json j = json::parse(is);
    LandmarkSet lm;
    if (j.contains("points") && j.at("points").is_array()) {
        int id = 0;
        for (const auto& p : j.at("points")) lm.set(id++, {p[0].get<double>(), p[1].get<double>()});
    } else if (j.contains("points") && j.at("points").is_object()) {
        for (const auto& [key, p] : j.at("points").items())
            lm.set(std::stoi(key), {p[0].get<double>(), p[1].get<double>()});
    } else {
        throw std::invalid_argument("landmark file needs a 'points' array or object: " + path);
    }
    return lm;
}

std::vector<ImageBuffer> load_png_dir(const std::string& dir) {
    std::vector<ImageBuffer> out;
    if (dir.empty()) return out;
    require_file(dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".png") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back(read_png(f.string()));
    return out;
}

// Deterministic worker pool over n items.
void parallel_for(int workers, size_t n, const std::function<void(size_t)>& body) {
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// augment
// ---------------------------------------------------------------------------

struct AugmentArgs {
    std::string manifest, protocol_path, out_dir, glasses_dir, backgrounds_dir, textures_dir;
    uint64_t seed = 0;
    bool seed_set = false;
    int epoch = 0;
    int workers = 1;
};

int run_augment(const GlobalOpts& g, const AugmentArgs& args) {
    RunConfig config = load_config_or_default(g);
    if (!args.protocol_path.empty()) {
        require_file(args.protocol_path);
        std::ifstream is(args.protocol_path);
        std::stringstream ss;
        ss << is.rdbuf();
        // A protocol file is the "augment" section of the config schema.
        RunConfig tmp = parse_run_config("{\"augment\":" + ss.str() + "}");
        config.protocol = tmp.protocol;
    }
    const uint64_t seed = args.seed_set ? args.seed : config.seed;

    require_file(args.manifest);
    std::vector<std::string> malformed;
    std::vector<SampleRecord> raw = load_manifest(args.manifest, &malformed);
    IngestReport report;
    SampleRegistry registry =
        ingest(raw, config.gaze_interval, config.head_pose_interval, &report);
    report.malformed.insert(report.malformed.end(), malformed.begin(), malformed.end());

    AugmentAssets assets;
    if (!args.glasses_dir.empty()) {
        require_file(args.glasses_dir);
        assets.glasses = load_glasses_library(args.glasses_dir);
    }
    assets.backgrounds = load_png_dir(args.backgrounds_dir);
    assets.textures = load_png_dir(args.textures_dir);
    assets.glasses_anchor_ids = config.landmarks.glasses_anchor_ids;
    assets.mask_polygon_ids = config.landmarks.mask_polygon_ids;
    assets.flip_swap_pairs = config.landmarks.flip_swap_pairs;

    fs::create_directories(args.out_dir);
    const size_t n = registry.records.size();
    const int n_views = config.protocol.views_per_sample;
    std::vector<json> meta_rows(n * static_cast<size_t>(n_views));

    parallel_for(args.workers, n, [&](size_t i) {
        const SampleRecord& rec = registry.records[i];
        SampleInputs inputs;
        inputs.sample_id = rec.sample_id;
        const std::string image_path = resolve_relative(args.manifest, rec.image_path);
        require_file(image_path);
        inputs.image = read_png(image_path);
        if (!rec.landmarks_path.empty())
            inputs.landmarks =
                load_landmarks_json(resolve_relative(args.manifest, rec.landmarks_path));
        if (!rec.matte_path.empty()) {
            ImageBuffer m = read_png(resolve_relative(args.manifest, rec.matte_path));
            inputs.matte = m.channels == 1 ? m : luma(m);
        }
        inputs.gaze = rec.gaze;
        inputs.head_pitch = rec.head_pitch;
        inputs.head_yaw = rec.head_yaw;

        const std::vector<AugmentedView> views =
            build_views(inputs, config.protocol, assets, seed, args.epoch);
        for (const AugmentedView& v : views) {
            const std::string name =
                rec.sample_id + "_v" + std::to_string(v.view_index) + ".png";
            write_png((fs::path(args.out_dir) / name).string(), v.image);
            json row;
            row["sample_id"] = rec.sample_id;
            row["view_index"] = v.view_index;
            row["file"] = name;
            row["pitch"] = v.gaze.pitch;
            row["yaw"] = v.gaze.yaw;
            row["glasses"] = v.glasses_flag;
            row["mask"] = v.mask_flag;
            row["flip"] = v.flip_applied;
            row["seed"] = v.seed;
            meta_rows[i * n_views + v.view_index] = std::move(row);
        }
    });

    std::ofstream meta((fs::path(args.out_dir) / "views.jsonl").string());
    for (const json& row : meta_rows)
        if (!row.is_null()) meta << row.dump() << "\n";
    meta.close();

    json machine;
    machine["command"] = "augment";
    machine["ok"] = true;
    machine["samples"] = n;
    machine["views"] = n * n_views;
    machine["dropped_gaze"] = report.dropped_gaze;
    machine["dropped_head"] = report.dropped_head;
    machine["malformed"] = report.malformed.size();
    std::ostringstream human;
    human << "augmented " << n << " samples -> " << n * n_views << " views in " << args.out_dir
          << "\n";
    emit(g, machine, human.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// annotate
// ---------------------------------------------------------------------------

struct AnnotateArgs {
    std::string manifest, out_dir;
    int workers = 1;
};

int run_annotate(const GlobalOpts& g, const AnnotateArgs& args) {
    RunConfig config = load_config_or_default(g);
    require_file(args.manifest);
    std::vector<std::string> malformed;
    std::vector<SampleRecord> raw = load_manifest(args.manifest, &malformed);
    fs::create_directories(args.out_dir);

    std::vector<json> rows(raw.size());
    parallel_for(args.workers, raw.size(), [&](size_t i) {
        const SampleRecord& rec = raw[i];
        const std::string image_path = resolve_relative(args.manifest, rec.image_path);
        const std::string lm_path = resolve_relative(args.manifest, rec.landmarks_path);
        require_file(image_path);
        require_file(lm_path);
        const ImageBuffer face = read_png(image_path);
        const LandmarkSet landmarks = load_landmarks_json(lm_path);
        const SegLabel label = annotate_sample(face, landmarks, config.annotate_config);

        json row;
        row["sample_id"] = rec.sample_id;
        auto save_mask = [&](const char* tag, const BinaryMask& m, bool valid) {
            const std::string name = rec.sample_id + "_" + tag + ".png";
            write_mask_png((fs::path(args.out_dir) / name).string(), m);
            row[std::string(tag) + "_file"] = name;
            row[std::string(tag) + "_valid"] = valid;
        };
        save_mask("eye_left", label.eye_left, label.eye_left_valid);
        save_mask("eye_right", label.eye_right, label.eye_right_valid);
        save_mask("iris_left", label.iris_left, label.iris_left_valid);
        save_mask("iris_right", label.iris_right, label.iris_right_valid);
        rows[i] = std::move(row);
    });

    std::ofstream meta((fs::path(args.out_dir) / "labels.jsonl").string());
    for (const json& row : rows)
        if (!row.is_null()) meta << row.dump() << "\n";

    json machine;
    machine["command"] = "annotate";
    machine["ok"] = true;
    machine["samples"] = raw.size();
    machine["malformed"] = malformed.size();
    emit(g, machine, "annotated " + std::to_string(raw.size()) + " samples\n");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// plan-epoch
// ---------------------------------------------------------------------------

struct PlanArgs {
    std::string manifest, out_path;
    int quota = -1;
    uint64_t seed = 0;
    bool seed_set = false;
    int epoch = 0;
    std::string policy = "error";
};

int run_plan(const GlobalOpts& g, const PlanArgs& args) {
    RunConfig config = load_config_or_default(g);
    require_file(args.manifest);
    std::vector<std::string> malformed;
    std::vector<SampleRecord> raw = load_manifest(args.manifest, &malformed);
    IngestReport report;
    SampleRegistry registry =
        ingest(raw, config.gaze_interval, config.head_pose_interval, &report);

    PlanParams params;
    params.quota = args.quota > 0 ? args.quota : config.sampling.quota_per_bin;
    params.seed = args.seed_set ? args.seed : config.seed;
    params.epoch = args.epoch;
    params.policy = args.policy == "skip" ? EmptyCellPolicy::Skip : EmptyCellPolicy::Error;
    params.subject_balanced_datasets = config.sampling.subject_balanced_datasets;

    const EpochPlan plan = plan_epoch(registry, config.grid(), params);
    if (!args.out_path.empty()) save_plan(args.out_path, plan);

    std::map<std::string, int64_t> per_dataset;
    for (const auto& [key, count] : plan.cell_counts) per_dataset[key.first] += count;

    json machine;
    machine["command"] = "plan-epoch";
    machine["ok"] = true;
    machine["entries"] = plan.entries.size();
    machine["per_dataset"] = per_dataset;
    machine["dropped_gaze"] = report.dropped_gaze;
    machine["dropped_head"] = report.dropped_head;
    std::ostringstream human;
    human << "plan has " << plan.entries.size() << " draws\n";
    for (const auto& [ds, count] : per_dataset) human << "  dataset " << ds << ": " << count
                                                      << " draws\n";
    emit(g, machine, human.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// loss-eval
// ---------------------------------------------------------------------------

struct LossArgs {
    std::string features, meta, logits;
};

int run_loss_eval(const GlobalOpts& g, const LossArgs& args) {
    RunConfig config = load_config_or_default(g);
    require_file(args.features);
    require_file(args.meta);
    FeatureBatch batch = load_feature_dump(args.features, args.meta);
    batch.validate();
    const GridSpec grid = config.grid();

    json machine;
    machine["command"] = "loss-eval";
    machine["ok"] = true;
    std::ostringstream human;

    if (batch.n() >= 2) {
        const double tau = config.weights.tau_S;
        const double l_phi =
            supcon_loss(batch.features, build_pitch_mask(batch, grid.bin_size(Axis::Pitch)), tau)
                .loss;
        const double l_d = supcon_loss(batch.features, build_dataset_mask(batch, grid), tau).loss;
        const double l_g =
            supcon_loss(batch.features, build_accessory_mask(batch, Accessory::Glasses), tau).loss;
        const double l_m =
            supcon_loss(batch.features, build_accessory_mask(batch, Accessory::Mask), tau).loss;
        machine["supcon_phi"] = l_phi;
        machine["supcon_d"] = l_d;
        machine["supcon_g"] = l_g;
        machine["supcon_m"] = l_m;
        human << "supcon_phi " << l_phi << "\nsupcon_d " << l_d << "\nsupcon_g " << l_g
              << "\nsupcon_m " << l_m << "\n";
    }

    if (!args.logits.empty()) {
        require_file(args.logits);
        CompositeTargets targets;
        std::ifstream is(args.logits);
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            const json j = json::parse(line);
            targets.pitch_logits.push_back(j.at("pitch_logits").get<std::vector<double>>());
            targets.yaw_logits.push_back(j.at("yaw_logits").get<std::vector<double>>());
        }
        const CompositeBreakdown b =
            composite_loss(batch, targets, config.weights, grid, config.composite);
        machine["reg"] = b.reg;
        machine["clf"] = b.clf;
        machine["seg"] = b.seg;
        machine["total"] = b.total;
        human << "reg " << b.reg << "\nclf " << b.clf << "\ntotal " << b.total << "\n";
    }

    emit(g, machine, human.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

struct CalibrateArgs {
    std::string pairs_path, out_path;
    int points = 1;
    int reps = 9;
    uint64_t seed = 0;
    bool seed_set = false;
    std::string mode = "protocol";  // protocol | fit
    std::string group_by = "subject";
    bool anchored = false;
};

int run_calibrate(const GlobalOpts& g, const CalibrateArgs& args) {
    RunConfig config = load_config_or_default(g);
    require_file(args.pairs_path);
    const std::vector<GazePointPair> pairs = load_point_pairs(args.pairs_path);
    if (pairs.empty()) throw EmptyInput("no pairs in " + args.pairs_path);
    const uint64_t seed = args.seed_set ? args.seed : config.seed;

    json machine;
    machine["command"] = "calibrate";
    machine["ok"] = true;
    std::ostringstream human;

    if (args.mode == "fit") {
        CalibrationModel model;
        if (args.points == 1) {
            // Screen center estimated from the ground-truth extent.
            const auto anchors = screen_anchors_from_extent(pairs);
            model = fit_one_point(select_center_points(pairs, 3, anchors.front()));
        } else if (args.anchored) {
            // Center plus corners, each averaging its 3 nearest pairs.
            auto anchors = screen_anchors_from_extent(pairs);
            anchors.resize(std::min<size_t>(anchors.size(), static_cast<size_t>(args.points)));
            const auto averaged = select_anchor_points(pairs, anchors, 3);
            model = fit_npoint(averaged);
        } else {
            model = fit_npoint(pairs);
        }
        const std::string text = model_to_json(model);
        if (!args.out_path.empty()) {
            std::ofstream os(args.out_path);
            os << text << "\n";
        }
        machine["model"] = json::parse(text);
        human << text << "\n";
    } else if (args.mode == "protocol") {
        std::map<std::string, std::vector<GazePointPair>> groups;
        for (const auto& p : pairs)
            groups[args.group_by == "session" ? p.session : p.subject].push_back(p);
        const MpiiProtocolResult result = mpii_protocol(groups, args.points, args.reps, seed);
        json per;
        for (const auto& [key, e] : result.per_subject)
            per[key] = {{"d_x", e.dx}, {"d_y", e.dy}, {"d_euclid", e.d2}};
        machine["per_group"] = per;
        machine["mean"] = {{"d_x", result.mean.dx},
                           {"d_y", result.mean.dy},
                           {"d_euclid", result.mean.d2}};
        human << "mean over groups: d_x " << result.mean.dx << "  d_y " << result.mean.dy
              << "  ||d|| " << result.mean.d2 << "\n";
    } else {
        throw std::invalid_argument("calibrate: mode must be 'protocol' or 'fit'");
    }

    emit(g, machine, human.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::string pred_path, mode = "screen", csv_out;
    bool exclude_reduced = false;
    double pitch_tol = 10.0;
    double other_tol = 5.0;
};

int run_evaluate(const GlobalOpts& g, const EvaluateArgs& args) {
    RunConfig config = load_config_or_default(g);
    require_file(args.pred_path);
    std::vector<PredictionRecord> records = load_prediction_records(args.pred_path);
    if (records.empty()) throw EmptyInput("no prediction records in " + args.pred_path);
    clamp_predictions(records, config.gaze_interval);

    json machine;
    machine["command"] = "evaluate";
    machine["mode"] = args.mode;
    machine["ok"] = true;
    std::ostringstream human;

    if (args.mode == "screen") {
        const GroupReport report = group_report(records, args.exclude_reduced);
        if (!args.csv_out.empty()) {
            std::ofstream os(args.csv_out);
            os << report.to_csv();
        }
        json rows;
        for (const auto& row : report.rows) {
            if (!row.present) continue;
            rows[row.group] = {{"count", row.errors.count},
                               {"d_x", row.errors.dx},
                               {"d_y", row.errors.dy},
                               {"d_euclid", row.errors.d2}};
        }
        machine["groups"] = rows;
        human << report.to_text();
    } else if (args.mode == "angular") {
        const AngularErrors e = angular_errors(records);
        machine["d"] = e.d;
        machine["d_pitch"] = e.d_pitch;
        machine["d_yaw"] = e.d_yaw;
        machine["count"] = e.count;
        human << "angular d " << e.d << "  d_pitch " << e.d_pitch << "  d_yaw " << e.d_yaw
              << " over " << e.count << " records\n";
    } else if (args.mode == "zerogaze") {
        const PoseFilterResult filtered = pose_filter(records, args.pitch_tol, args.other_tol);
        const auto stats = zerogaze_stats(filtered.retained);
        json views;
        for (const auto& [view, b] : stats)
            views[view] = {{"mean_pitch", b.mean_pitch}, {"mean_yaw", b.mean_yaw},
                           {"std_pitch", b.std_pitch},   {"std_yaw", b.std_yaw},
                           {"p95_radius", b.p95_radius}, {"count", b.count}};
        machine["views"] = views;
        machine["dropped_incomplete"] = filtered.dropped_incomplete;
        machine["dropped_pose"] = filtered.dropped_pose;
        human << "retained " << filtered.retained.size() / 3 << " triplets (dropped "
              << filtered.dropped_incomplete << " incomplete, " << filtered.dropped_pose
              << " by pose)\n";
        for (const auto& [view, b] : stats)
            human << "  " << view << ": bias (" << b.mean_pitch << ", " << b.mean_yaw
                  << ") deg, std (" << b.std_pitch << ", " << b.std_yaw << "), p95 "
                  << b.p95_radius << "\n";
    } else {
        throw std::invalid_argument("evaluate: mode must be screen, angular, or zerogaze");
    }

    emit(g, machine, human.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// config-check
// ---------------------------------------------------------------------------

int run_config_check(const GlobalOpts& g) {
    const RunConfig config = load_config_or_default(g);
    const GridSpec grid = config.grid();
    json machine;
    machine["command"] = "config-check";
    machine["ok"] = true;
    machine["bins_total"] = grid.total_bins();
    machine["n_pitch"] = grid.n_pitch;
    machine["n_yaw"] = grid.n_yaw;
    machine["bin_size_pitch"] = grid.bin_size(Axis::Pitch);
    machine["bin_size_yaw"] = grid.bin_size(Axis::Yaw);
    machine["quota_per_bin"] = config.sampling.quota_per_bin;
    machine["plan_size_per_dataset"] =
        static_cast<int64_t>(grid.total_bins()) * config.sampling.quota_per_bin;
    std::ostringstream human;
    human << "config ok: " << grid.total_bins() << " bins (" << grid.n_pitch << " pitch x "
          << grid.n_yaw << " yaw), bin size " << grid.bin_size(Axis::Pitch) << " deg, quota "
          << config.sampling.quota_per_bin << " -> "
          << static_cast<int64_t>(grid.total_bins()) * config.sampling.quota_per_bin
          << " draws per dataset\n";
    emit(g, machine, human.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gazeforge: dataset engineering toolkit for gaze estimation"};
    app.require_subcommand(1);

    GlobalOpts global;
    app.add_option("--config", global.config_path,
                   "run configuration JSON (falls back to GAZEFORGE_CONFIG)");
    app.add_flag("--json", global.json_output, "machine-readable JSON summary on stdout");

    AugmentArgs aug;
    CLI::App* c_aug = app.add_subcommand("augment", "build augmented multi-view images");
    c_aug->add_option("--manifest", aug.manifest, "sample manifest JSONL")->required();
    c_aug->add_option("--protocol", aug.protocol_path, "augment protocol JSON override");
    c_aug->add_option("--out", aug.out_dir, "output directory")->required();
    c_aug->add_option("--seed", aug.seed, "seed override")->each([&](const std::string&) {
        aug.seed_set = true;
    });
    c_aug->add_option("--epoch", aug.epoch, "epoch number folded into view seeds");
    c_aug->add_option("--workers", aug.workers, "worker thread count");
    c_aug->add_option("--glasses", aug.glasses_dir, "glasses template library directory");
    c_aug->add_option("--backgrounds", aug.backgrounds_dir, "background PNG directory");
    c_aug->add_option("--textures", aug.textures_dir, "texture PNG directory");

    AnnotateArgs ann;
    CLI::App* c_ann = app.add_subcommand("annotate", "generate eye and iris masks");
    c_ann->add_option("--manifest", ann.manifest, "sample manifest JSONL")->required();
    c_ann->add_option("--out", ann.out_dir, "output directory")->required();
    c_ann->add_option("--workers", ann.workers, "worker thread count");

    PlanArgs plan;
    CLI::App* c_plan = app.add_subcommand("plan-epoch", "stratified epoch sampling plan");
    c_plan->add_option("--manifest", plan.manifest, "sample manifest JSONL")->required();
    c_plan->add_option("--out", plan.out_path, "plan JSONL output path");
    c_plan->add_option("--quota", plan.quota, "per-bin per-dataset quota");
    c_plan->add_option("--seed", plan.seed, "seed override")->each([&](const std::string&) {
        plan.seed_set = true;
    });
    c_plan->add_option("--epoch", plan.epoch, "epoch number");
    c_plan->add_option("--policy", plan.policy, "empty-cell policy: error|skip")
        ->check(CLI::IsMember({"error", "skip"}));

    LossArgs loss;
    CLI::App* c_loss = app.add_subcommand("loss-eval", "evaluate loss kernels on a feature dump");
    c_loss->add_option("--features", loss.features, "feature dump file")->required();
    c_loss->add_option("--meta", loss.meta, "metadata JSONL sidecar")->required();
    c_loss->add_option("--logits", loss.logits, "per-row logits JSONL (enables composite)");

    CalibrateArgs cal;
    CLI::App* c_cal = app.add_subcommand("calibrate", "training-free linear calibration");
    c_cal->add_option("--pairs", cal.pairs_path, "prediction/ground-truth CSV")->required();
    c_cal->add_option("--points", cal.points, "calibration point count")->required();
    c_cal->add_option("--reps", cal.reps, "protocol repetitions");
    c_cal->add_option("--seed", cal.seed, "seed override")->each([&](const std::string&) {
        cal.seed_set = true;
    });
    c_cal->add_option("--mode", cal.mode, "protocol | fit")
        ->check(CLI::IsMember({"protocol", "fit"}));
    c_cal->add_option("--group-by", cal.group_by, "subject | session")
        ->check(CLI::IsMember({"subject", "session"}));
    c_cal->add_option("--out", cal.out_path, "model JSON output path (fit mode)");
    c_cal->add_flag("--anchored", cal.anchored,
                    "fit mode: average 3 nearest pairs at the screen center and corners");

    EvaluateArgs ev;
    CLI::App* c_ev = app.add_subcommand("evaluate", "benchmark metrics over prediction files");
    c_ev->add_option("--pred", ev.pred_path, "prediction CSV")->required();
    c_ev->add_option("--mode", ev.mode, "screen | angular | zerogaze")
        ->check(CLI::IsMember({"screen", "angular", "zerogaze"}));
    c_ev->add_option("--csv", ev.csv_out, "write the report as CSV");
    c_ev->add_flag("--exclude-reduced", ev.exclude_reduced,
                   "exclude reduced-session subjects from non-Overall groups");
    c_ev->add_option("--pitch-tol", ev.pitch_tol, "zerogaze pitch tolerance, degrees");
    c_ev->add_option("--other-tol", ev.other_tol, "zerogaze yaw/roll tolerance, degrees");

    CLI::App* c_cfg = app.add_subcommand("config-check", "validate config and echo derived values");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_aug)) return run_augment(global, aug);
        if (app.got_subcommand(c_ann)) return run_annotate(global, ann);
        if (app.got_subcommand(c_plan)) return run_plan(global, plan);
        if (app.got_subcommand(c_loss)) return run_loss_eval(global, loss);
        if (app.got_subcommand(c_cal)) return run_calibrate(global, cal);
        if (app.got_subcommand(c_ev)) return run_evaluate(global, ev);
        if (app.got_subcommand(c_cfg)) return run_config_check(global);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const MissingFile& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMissingFile;
    } catch (const EmptyInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmpty;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::out_of_range& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
