// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "polarfuse/errors.hpp"

namespace polarfuse {

namespace {
constexpr double kRadToDeg = 57.29577951308232;

void require_mask_fits(const Image& img, const Mask& mask, const char* what) {
    if (img.width != mask.width || img.height != mask.height)
        throw DimensionError(std::string(what) + ": mask size mismatch");
}
} // namespace

AlignResult align_affine(const Image& pred, const Image& gt, const Mask& mask) {
    if (!pred.same_size(gt)) throw DimensionError("align_affine: image sizes differ");
    require_mask_fits(pred, mask, "align_affine");
    long n = mask.count();
    if (n == 0) throw ArgumentError("align_affine: empty mask");

    // Normal equations for min ||s*p + b - g||^2.
    double sp = 0, sg = 0, spp = 0, spg = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (!mask.data[i]) continue;
        double p = pred.data[i], g = gt.data[i];
        sp += p;
        sg += g;
        spp += p * p;
        spg += p * g;
    }
    double nd = static_cast<double>(n);
    double det = nd * spp - sp * sp;

    AlignResult out;
    if (std::abs(det) < 1e-12 * std::max(1.0, spp * nd)) {
        out.params.scale = 0.0;
        out.params.shift = sg / nd;
        out.params.degenerate = true;
    } else {
        out.params.scale = (nd * spg - sp * sg) / det;
        out.params.shift = (sg - out.params.scale * sp) / nd;
    }
    out.aligned = Image(pred.width, pred.height);
    for (size_t i = 0; i < pred.size(); ++i)
        out.aligned.data[i] = out.params.scale * pred.data[i] + out.params.shift;
    return out;
}

DepthMetrics depth_metrics(const Image& pred_aligned, const Image& gt, const Mask& mask,
                           double d_min) {
    if (!pred_aligned.same_size(gt)) throw DimensionError("depth_metrics: image sizes differ");
    require_mask_fits(gt, mask, "depth_metrics");
    if (mask.count() == 0) throw ArgumentError("depth_metrics: empty mask");

    DepthMetrics m;
    double absrel_sum = 0.0;
    long ok1 = 0, ok2 = 0;
    for (size_t i = 0; i < gt.size(); ++i) {
        if (!mask.data[i]) continue;
        double g = gt.data[i];
        if (g <= d_min) throw ArgumentError("depth_metrics: ground truth at or below d_min");
        double p = pred_aligned.data[i];
        if (p <= d_min) {
            p = d_min;
            ++m.clamped_pixels;
        }
        absrel_sum += std::abs(p - g) / g;
        double ratio = std::max(p / g, g / p);
        if (ratio < 1.25) ++ok1;
        if (ratio < 1.25 * 1.25) ++ok2;
        ++m.n_pixels;
    }
    m.absrel = absrel_sum / static_cast<double>(m.n_pixels);
    m.delta1 = static_cast<double>(ok1) / static_cast<double>(m.n_pixels);
    m.delta2 = static_cast<double>(ok2) / static_cast<double>(m.n_pixels);
    return m;
}

NormalMetrics normal_metrics(const Tensor& pred, const Tensor& gt, const Mask& mask) {
    if (pred.rank() != 3 || gt.rank() != 3 || pred.dim(0) != 3 || gt.dim(0) != 3)
        throw DimensionError("normal_metrics: 3 x H x W fields required");
    if (!pred.same_shape(gt)) throw DimensionError("normal_metrics: shapes differ");
    int h = pred.dim(1), w = pred.dim(2);
    if (mask.width != w || mask.height != h)
        throw DimensionError("normal_metrics: mask size mismatch");
    if (mask.count() == 0) throw ArgumentError("normal_metrics: empty mask");

    NormalMetrics m;
    std::vector<double> errors;
    errors.reserve(static_cast<size_t>(mask.count()));
    double sum = 0.0, sum_sq = 0.0;
    long ok1 = 0, ok2 = 0, ok3 = 0;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(y, x)) continue;
            double px = pred.at(0, y, x), py = pred.at(1, y, x), pz = pred.at(2, y, x);
            double gx = gt.at(0, y, x), gy = gt.at(1, y, x), gz = gt.at(2, y, x);
            double pn = std::sqrt(px * px + py * py + pz * pz);
            double gn = std::sqrt(gx * gx + gy * gy + gz * gz);
            if (pn < 1e-12 || gn < 1e-12) {
                ++m.zero_vectors;
                continue;
            }
            double c = (px * gx + py * gy + pz * gz) / (pn * gn);
            double err = std::acos(std::clamp(c, -1.0, 1.0)) * kRadToDeg;
            errors.push_back(err);
            sum += err;
            sum_sq += err * err;
            if (err < 11.25) ++ok1;
            if (err < 22.5) ++ok2;
            if (err < 30.0) ++ok3;
        }
    }
    if (errors.empty()) throw ArgumentError("normal_metrics: no valid normals under the mask");

    m.n_pixels = static_cast<long>(errors.size());
    double nd = static_cast<double>(m.n_pixels);
    m.mean_deg = sum / nd;
    m.rmse_deg = std::sqrt(sum_sq / nd);
    std::sort(errors.begin(), errors.end());
    m.median_deg = errors[(errors.size() - 1) / 2]; // lower-of-two-middles
    m.acc_11_25 = static_cast<double>(ok1) / nd;
    m.acc_22_5 = static_cast<double>(ok2) / nd;
    m.acc_30 = static_cast<double>(ok3) / nd;
    m.median_gt_mean = m.median_deg > m.mean_deg;
    return m;
}

DegradationDeltas degradation(const DepthMetrics& at_beta0, const DepthMetrics& at_beta_max) {
    DegradationDeltas d;
    d.d_absrel = at_beta_max.absrel - at_beta0.absrel;
    d.d_delta1 = at_beta0.delta1 - at_beta_max.delta1;
    d.d_delta2 = at_beta0.delta2 - at_beta_max.delta2;
    return d;
}

std::string MetricsReport::to_json() const {
    nlohmann::json j;
    j["task"] = task;
    j["n_samples"] = n_samples;
    long clamped = 0;
    if (depth) {
        j["absrel"] = depth->absrel * 100.0;
        j["delta1"] = depth->delta1 * 100.0;
        j["delta2"] = depth->delta2 * 100.0;
        clamped = depth->clamped_pixels;
    }
    if (normal) {
        j["normal"] = {{"mean", normal->mean_deg},
                       {"median", normal->median_deg},
                       {"rmse", normal->rmse_deg},
                       {"acc11_25", normal->acc_11_25 * 100.0},
                       {"acc22_5", normal->acc_22_5 * 100.0},
                       {"acc30", normal->acc_30 * 100.0}};
        clamped += normal->zero_vectors;
    }
    if (degradation) {
        j["degradation"] = {{"absrel", degradation->d_absrel * 100.0},
                            {"delta1", degradation->d_delta1 * 100.0},
                            {"delta2", degradation->d_delta2 * 100.0}};
    }
    j["clamped_pixels"] = clamped;
    j["seed"] = seed;
    j["checkpoint_hash"] = checkpoint_hash;
    return j.dump(2);
}

} // namespace polarfuse
