// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "polarfuse/image.hpp"
#include "polarfuse/tensor.hpp"

namespace polarfuse {

struct DepthMetrics {
    double absrel = 0.0; // mean |pred - gt| / gt, as a fraction
    double delta1 = 0.0; // fraction with max(pred/gt, gt/pred) < 1.25
    double delta2 = 0.0; // ... < 1.25^2; thresholds are strict
    long n_pixels = 0;
    long clamped_pixels = 0; // predictions floored at d_min
};

struct NormalMetrics {
    double mean_deg = 0.0;
    double median_deg = 0.0; // lower-of-two-middles for even counts
    double rmse_deg = 0.0;
    double acc_11_25 = 0.0; // fraction with error < threshold (strict)
    double acc_22_5 = 0.0;
    double acc_30 = 0.0;
    long n_pixels = 0;
    long zero_vectors = 0;       // excluded from the statistics
    bool median_gt_mean = false; // skew note
};

// Least-squares scale/shift fit of pred onto gt over the mask. A constant
// prediction degenerates to s = 0, b = mean(gt), flagged.
struct AlignmentParams {
    double scale = 1.0;
    double shift = 0.0;
    bool degenerate = false;
};

struct AlignResult {
    AlignmentParams params;
    Image aligned;
};

AlignResult align_affine(const Image& pred, const Image& gt, const Mask& mask);

// AbsRel and delta accuracies over the mask. gt must exceed d_min there;
// aligned predictions at or below d_min are clamped up and counted.
DepthMetrics depth_metrics(const Image& pred_aligned, const Image& gt, const Mask& mask,
                           double d_min = 1e-3);

// Angular statistics between two unit-normal fields (3 x H x W).
// Both are re-normalized defensively; zero vectors are excluded and counted.
NormalMetrics normal_metrics(const Tensor& pred, const Tensor& gt, const Mask& mask);

// Per-metric deltas between the clean and the most degraded run, oriented
// so that larger always means worse.
struct DegradationDeltas {
    double d_absrel = 0.0; // absrel(beta_max) - absrel(0)
    double d_delta1 = 0.0; // delta1(0) - delta1(beta_max)
    double d_delta2 = 0.0;
};

DegradationDeltas degradation(const DepthMetrics& at_beta0, const DepthMetrics& at_beta_max);

// Aggregate report serialized by the CLI. Metrics are stored as fractions
// here; to_json() emits the paper-table convention (percent for absrel,
// deltas and accuracies, degrees for angular errors).
struct MetricsReport {
    std::string task; // depth | normal
    long n_samples = 0;
    std::optional<DepthMetrics> depth;
    std::optional<NormalMetrics> normal;
    std::optional<DegradationDeltas> degradation;
    uint64_t seed = 0;
    std::string checkpoint_hash;

    std::string to_json() const;
};

} // namespace polarfuse
