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

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gazeforge/gridcodec.hpp"
#include "gazeforge/image.hpp"

namespace gazeforge {

struct RowMeta {
    int64_t sample_id = 0;
    int view_index = 0;
    std::string dataset_id;  // "X", "N", "C", ...
    std::string subject_id;
    bool glasses = false;
    bool mask = false;
    GazeAngles label;
    bool flipped = false;
};

/// Multi-viewed batch of row-normalized embeddings plus per-row metadata.
struct FeatureBatch {
    Eigen::MatrixXd features;  // N x d, rows unit-norm within 1e-6
    std::vector<RowMeta> meta;

    int n() const { return static_cast<int>(features.rows()); }
    int dim() const { return static_cast<int>(features.cols()); }

    /// Throws unless meta size matches and every row is unit-norm (1e-6).
    void validate() const;
};

/// Symmetric boolean N x N matrix with a zero diagonal; entry (i, j) marks
/// rows i and j as a positive pair.
class PairMask {
public:
    PairMask() = default;
    explicit PairMask(int n) : n_(n), v_(static_cast<size_t>(n) * n, 0) {}

    int n() const { return n_; }
    bool at(int i, int j) const { return v_[static_cast<size_t>(i) * n_ + j] != 0; }
    void set_pair(int i, int j) {
        if (i == j) return;
        v_[static_cast<size_t>(i) * n_ + j] = 1;
        v_[static_cast<size_t>(j) * n_ + i] = 1;
    }
    bool symmetric_zero_diag() const;
    size_t positive_count() const;

private:
    int n_ = 0;
    std::vector<uint8_t> v_;
};

struct LossWeights {
    double lambda_clf = 0.1;
    double lambda_seg = 0.05;
    double lambda_D = 0.0025;
    double lambda_phi = 0.005;
    double lambda_g = 0.0025;
    double lambda_m = 0.0025;
    double tau_S = 0.07;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Supervised contrastive loss
// ---------------------------------------------------------------------------

struct SupConResult {
    double loss = 0.0;
    /// Gradient with respect to the raw (pre-normalization) features; rows
    /// are L2-normalized inside the loss.
    Eigen::MatrixXd grad;
};

/// Sum over anchors with nonempty positive sets of the mean positive
/// log-ratio; anchors without positives contribute zero. Requires N >= 2.
SupConResult supcon_loss(const Eigen::MatrixXd& features, const PairMask& mask, double tau_s);

// ---------------------------------------------------------------------------
// Pair-mask builders
// ---------------------------------------------------------------------------

/// Positives are pairs whose pitch labels differ by at most s_pitch degrees.
PairMask build_pitch_mask(const FeatureBatch& batch, double s_pitch);

/// Positives come from different datasets but share the gaze grid bin on
/// both axes (labels are clamped onto the grid interval first).
PairMask build_dataset_mask(const FeatureBatch& batch, const GridSpec& grid);

enum class Accessory { Glasses, Mask };

/// Positives are views of the same source sample whose selected accessory
/// flag differs.
PairMask build_accessory_mask(const FeatureBatch& batch, Accessory which);

// ---------------------------------------------------------------------------
// Pointwise losses
// ---------------------------------------------------------------------------

struct CeResult {
    double loss = 0.0;
    std::vector<double> grad_logits;
};

/// -log p[target]; the gradient uses the softmax cross-entropy identity
/// p - onehot(target), valid when p is the softmax of the logits.
CeResult ce_loss(std::span<const double> probs, int target);

/// Cross-entropy directly from logits through sharpened_softmax(logits, tau);
/// gradient includes the 1/tau factor.
CeResult ce_from_logits(std::span<const double> logits, int target, double tau);

enum class L1Axes { Both, YawOnly };

/// Mean absolute error over the selected axes.
double l1_loss(const GazeAngles& pred, const GazeAngles& gt, L1Axes axes);

struct DiceResult {
    double loss = 0.0;
    std::vector<double> grad;  // d loss / d pred, per pixel
};

/// 1 - (2 sum(p*g) + eps) / (sum(p) + sum(g) + eps).
DiceResult dice_loss(std::span<const double> pred, const BinaryMask& gt, double eps = 1e-6);
DiceResult dice_loss(const ImageBuffer& pred, const BinaryMask& gt, double eps = 1e-6);

// ---------------------------------------------------------------------------
// Composite objective
// ---------------------------------------------------------------------------

struct SegPair {
    ImageBuffer pred;  // soft mask, 1 channel
    BinaryMask gt;
};

/// Per-row model outputs and segmentation supervision; rows align with the
/// batch. seg may be empty per row (segmentation disabled for that row).
struct CompositeTargets {
    std::vector<std::vector<double>> pitch_logits;
    std::vector<std::vector<double>> yaw_logits;
    std::vector<std::vector<SegPair>> seg;
};

struct CompositeOptions {
    double softmax_tau = 0.5;
    std::set<std::string> pitch_attenuated_datasets = {"N", "C"};
};

struct CompositeBreakdown {
    double reg = 0.0;
    double clf = 0.0;
    double seg = 0.0;
    double supcon_D = 0.0;
    double supcon_phi = 0.0;
    double supcon_g = 0.0;
    double supcon_m = 0.0;
    double total = 0.0;

    double weighted_sum(const LossWeights& w) const {
        return reg + w.lambda_clf * clf + w.lambda_seg * seg + w.lambda_D * supcon_D +
               w.lambda_phi * supcon_phi + w.lambda_g * supcon_g + w.lambda_m * supcon_m;
    }
};

/// Weighted multi-task objective. For rows from pitch-attenuated datasets the
/// pitch halves of the regression and classification terms are zeroed; yaw
/// terms are always kept. Segmentation averages the Dice loss over all valid
/// (row, task) masks and is zero when none exist.
CompositeBreakdown composite_loss(const FeatureBatch& batch, const CompositeTargets& targets,
                                  const LossWeights& weights, const GridSpec& grid,
                                  const CompositeOptions& options = {});

// ---------------------------------------------------------------------------
// Gradient verification
// ---------------------------------------------------------------------------

/// Loss with analytic gradient over a flat parameter vector.
using LossFn = std::function<std::pair<double, Eigen::VectorXd>(const Eigen::VectorXd&)>;

/// Max relative deviation between the analytic gradient at x0 and central
/// finite differences with step h. Denominators are floored at 1e-6.
double grad_check(const LossFn& fn, const Eigen::VectorXd& x0, double h);

}  // namespace gazeforge
