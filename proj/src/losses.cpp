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

#include "gazeforge/losses.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gazeforge {

void FeatureBatch::validate() const {
    if (static_cast<int>(meta.size()) != n())
        throw std::invalid_argument("FeatureBatch: meta size does not match feature rows");
    for (int i = 0; i < n(); ++i) {
        const double norm = features.row(i).norm();
        if (std::abs(norm - 1.0) > 1e-6)
            throw std::invalid_argument("FeatureBatch: row " + std::to_string(i) +
                                        " is not unit-norm");
    }
}

bool PairMask::symmetric_zero_diag() const {
    for (int i = 0; i < n_; ++i) {
        if (at(i, i)) return false;
        for (int j = i + 1; j < n_; ++j)
            if (at(i, j) != at(j, i)) return false;
    }
    return true;
}

size_t PairMask::positive_count() const {
    size_t c = 0;
    for (uint8_t v : v_) c += v;
    return c / 2;
}

void LossWeights::validate() const {
    if (lambda_clf < 0 || lambda_seg < 0 || lambda_D < 0 || lambda_phi < 0 || lambda_g < 0 ||
        lambda_m < 0)
        throw std::invalid_argument("LossWeights: weights must be nonnegative");
    if (tau_S <= 0) throw std::invalid_argument("LossWeights: tau_S must be positive");
}

// ---------------------------------------------------------------------------
// SupCon
// ---------------------------------------------------------------------------

SupConResult supcon_loss(const Eigen::MatrixXd& features, const PairMask& mask, double tau_s) {
    const int n = static_cast<int>(features.rows());
    if (n < 2) throw std::invalid_argument("supcon_loss: batch size must be >= 2");
    if (mask.n() != n) throw std::invalid_argument("supcon_loss: mask size mismatch");
    if (!mask.symmetric_zero_diag())
        throw std::invalid_argument("supcon_loss: mask must be symmetric with zero diagonal");
    if (tau_s <= 0) throw std::invalid_argument("supcon_loss: tau must be positive");

    Eigen::MatrixXd z = features;
    Eigen::VectorXd norms(n);
    for (int i = 0; i < n; ++i) {
        norms(i) = z.row(i).norm();
        if (norms(i) < 1e-12) throw std::invalid_argument("supcon_loss: zero-norm feature row");
        z.row(i) /= norms(i);
    }

    const Eigen::MatrixXd sim = (z * z.transpose()) / tau_s;

    double loss = 0.0;
    // c(a,q) = softmax_{q != a}(sim) - M(a,q)/|P(a)| for anchors with positives.
    Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        int pos = 0;
        for (int q = 0; q < n; ++q)
            if (q != a && mask.at(a, q)) ++pos;
        if (pos == 0) continue;

        double mx = -std::numeric_limits<double>::infinity();
        for (int q = 0; q < n; ++q)
            if (q != a) mx = std::max(mx, sim(a, q));
        double denom = 0.0;
        for (int q = 0; q < n; ++q)
            if (q != a) denom += std::exp(sim(a, q) - mx);
        const double log_denom = mx + std::log(denom);

        double mean_pos = 0.0;
        for (int q = 0; q < n; ++q)
            if (q != a && mask.at(a, q)) mean_pos += sim(a, q);
        mean_pos /= pos;
        loss += -(mean_pos - log_denom);

        for (int q = 0; q < n; ++q) {
            if (q == a) continue;
            const double softmax = std::exp(sim(a, q) - mx) / denom;
            coeff(a, q) = softmax - (mask.at(a, q) ? 1.0 / pos : 0.0);
        }
    }

    // d loss / d z = (coeff + coeff^T) z / tau, then back through the row
    // normalization: d loss / d v_i = (I - z z^T) g_i / ||v_i||.
    const Eigen::MatrixXd gz = (coeff + coeff.transpose()) * z / tau_s;
    Eigen::MatrixXd grad(n, static_cast<int>(features.cols()));
    for (int i = 0; i < n; ++i) {
        const Eigen::RowVectorXd zi = z.row(i);
        grad.row(i) = (gz.row(i) - (gz.row(i).dot(zi)) * zi) / norms(i);
    }
    return {loss, std::move(grad)};
}

// ---------------------------------------------------------------------------
// Pair-mask builders
// ---------------------------------------------------------------------------

PairMask build_pitch_mask(const FeatureBatch& batch, double s_pitch) {
    const int n = batch.n();
    PairMask m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(batch.meta[i].label.pitch - batch.meta[j].label.pitch) <= s_pitch)
                m.set_pair(i, j);
    return m;
}

PairMask build_dataset_mask(const FeatureBatch& batch, const GridSpec& grid) {
    const int n = batch.n();
    std::vector<std::pair<int, int>> bins(n);
    for (int i = 0; i < n; ++i)
        bins[i] = discretize(clamp_to_interval(batch.meta[i].label, grid.interval), grid);
    PairMask m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (batch.meta[i].dataset_id != batch.meta[j].dataset_id && bins[i] == bins[j])
                m.set_pair(i, j);
    return m;
}

PairMask build_accessory_mask(const FeatureBatch& batch, Accessory which) {
    const int n = batch.n();
    PairMask m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (batch.meta[i].sample_id != batch.meta[j].sample_id) continue;
            const bool fi =
                which == Accessory::Glasses ? batch.meta[i].glasses : batch.meta[i].mask;
            const bool fj =
                which == Accessory::Glasses ? batch.meta[j].glasses : batch.meta[j].mask;
            if (fi != fj) m.set_pair(i, j);
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Pointwise losses
// ---------------------------------------------------------------------------

CeResult ce_loss(std::span<const double> probs, int target) {
    if (target < 0 || target >= static_cast<int>(probs.size()))
        throw std::out_of_range("ce_loss: target index out of range");
    CeResult r;
    r.loss = -std::log(std::max(probs[target], 1e-300));
    r.grad_logits.assign(probs.begin(), probs.end());
    r.grad_logits[target] -= 1.0;
    return r;
}

CeResult ce_from_logits(std::span<const double> logits, int target, double tau) {
    const BinProbabilities p = sharpened_softmax(logits, tau);
    CeResult r = ce_loss(p, target);
    for (double& g : r.grad_logits) g /= tau;
    return r;
}

double l1_loss(const GazeAngles& pred, const GazeAngles& gt, L1Axes axes) {
    const double dp = std::abs(pred.pitch - gt.pitch);
    const double dy = std::abs(pred.yaw - gt.yaw);
    return axes == L1Axes::Both ? 0.5 * (dp + dy) : dy;
}

DiceResult dice_loss(std::span<const double> pred, const BinaryMask& gt, double eps) {
    if (pred.size() != gt.data.size())
        throw std::invalid_argument("dice_loss: prediction/target dimension mismatch");
    double inter = 0.0, sum_p = 0.0, sum_g = 0.0;
    const size_t n = pred.size();
    for (size_t i = 0; i < n; ++i) {
        const double g = gt.data[i] ? 1.0 : 0.0;
        inter += pred[i] * g;
        sum_p += pred[i];
        sum_g += g;
    }
    const double num = 2.0 * inter + eps;
    const double den = sum_p + sum_g + eps;
    DiceResult r;
    r.loss = 1.0 - num / den;
    r.grad.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double g = gt.data[i] ? 1.0 : 0.0;
        r.grad[i] = (num - 2.0 * g * den) / (den * den);
    }
    return r;
}

DiceResult dice_loss(const ImageBuffer& pred, const BinaryMask& gt, double eps) {
    if (pred.channels != 1 || pred.width != gt.width || pred.height != gt.height)
        throw std::invalid_argument("dice_loss: prediction/target dimension mismatch");
    std::vector<double> values(pred.data.begin(), pred.data.end());
    return dice_loss(std::span<const double>(values), gt, eps);
}

// ---------------------------------------------------------------------------
// Composite objective
// ---------------------------------------------------------------------------

CompositeBreakdown composite_loss(const FeatureBatch& batch, const CompositeTargets& targets,
                                  const LossWeights& weights, const GridSpec& grid,
                                  const CompositeOptions& options) {
    weights.validate();
    batch.validate();
    const int n = batch.n();
    if (static_cast<int>(targets.pitch_logits.size()) != n ||
        static_cast<int>(targets.yaw_logits.size()) != n)
        throw std::invalid_argument("composite_loss: per-row logits required for every row");
    if (!targets.seg.empty() && static_cast<int>(targets.seg.size()) != n)
        throw std::invalid_argument("composite_loss: seg rows must match batch rows");

    CompositeBreakdown out;
    size_t seg_terms = 0;
    for (int i = 0; i < n; ++i) {
        const RowMeta& row = batch.meta[i];
        const bool attenuated = options.pitch_attenuated_datasets.count(row.dataset_id) != 0;

        const GazeAngles gt = clamp_to_interval(row.label, grid.interval);
        const auto [t_pitch, t_yaw] = discretize(gt, grid);

        const BinProbabilities pp = sharpened_softmax(targets.pitch_logits[i], options.softmax_tau);
        const BinProbabilities py = sharpened_softmax(targets.yaw_logits[i], options.softmax_tau);
        const GazeAngles pred{decode_expectation(pp, Axis::Pitch, grid),
                              decode_expectation(py, Axis::Yaw, grid)};

        // Pitch halves zeroed for attenuated rows; yaw keeps its coefficient.
        const double pitch_reg = attenuated ? 0.0 : 0.5 * std::abs(pred.pitch - gt.pitch);
        out.reg += pitch_reg + 0.5 * std::abs(pred.yaw - gt.yaw);

        const double pitch_ce = attenuated ? 0.0 : ce_loss(pp, t_pitch).loss;
        out.clf += pitch_ce + ce_loss(py, t_yaw).loss;

        if (!targets.seg.empty()) {
            for (const SegPair& sp : targets.seg[i]) {
                out.seg += dice_loss(sp.pred, sp.gt).loss;
                ++seg_terms;
            }
        }
    }
    out.reg /= n;
    out.clf /= n;
    out.seg = seg_terms ? out.seg / static_cast<double>(seg_terms) : 0.0;

    if (n >= 2) {
        out.supcon_phi =
            supcon_loss(batch.features, build_pitch_mask(batch, grid.bin_size(Axis::Pitch)),
                        weights.tau_S)
                .loss;
        out.supcon_D =
            supcon_loss(batch.features, build_dataset_mask(batch, grid), weights.tau_S).loss;
        out.supcon_g =
            supcon_loss(batch.features, build_accessory_mask(batch, Accessory::Glasses),
                        weights.tau_S)
                .loss;
        out.supcon_m =
            supcon_loss(batch.features, build_accessory_mask(batch, Accessory::Mask), weights.tau_S)
                .loss;
    }

    out.total = out.weighted_sum(weights);
    return out;
}

// ---------------------------------------------------------------------------
// Gradient verification
// ---------------------------------------------------------------------------

double grad_check(const LossFn& fn, const Eigen::VectorXd& x0, double h) {
    if (h <= 0) throw std::invalid_argument("grad_check: step must be positive");
    const auto [loss0, analytic] = fn(x0);
    (void)loss0;
    double worst = 0.0;
    Eigen::VectorXd x = x0;
    for (int i = 0; i < x0.size(); ++i) {
        x(i) = x0(i) + h;
        const double up = fn(x).first;
        x(i) = x0(i) - h;
        const double down = fn(x).first;
        x(i) = x0(i);
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max({std::abs(numeric), std::abs(analytic(i)), 1e-6});
        worst = std::max(worst, std::abs(numeric - analytic(i)) / denom);
    }
    return worst;
}

}  // namespace gazeforge
