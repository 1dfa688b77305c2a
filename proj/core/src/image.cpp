// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/image.hpp"

#include <algorithm>
#include <cmath>

#include "polarfuse/errors.hpp"

namespace polarfuse {

long Mask::count() const {
    long c = 0;
    for (uint8_t v : data) c += (v != 0);
    return c;
}

double image_min(const Image& img) {
    if (img.data.empty()) throw ArgumentError("image_min: empty image");
    return *std::min_element(img.data.begin(), img.data.end());
}

double image_max(const Image& img) {
    if (img.data.empty()) throw ArgumentError("image_max: empty image");
    return *std::max_element(img.data.begin(), img.data.end());
}

bool image_all_finite(const Image& img) {
    for (double v : img.data)
        if (!std::isfinite(v)) return false;
    return true;
}

double image_percentile(const Image& img, double p) {
    if (img.data.empty()) throw ArgumentError("image_percentile: empty image");
    if (p < 0.0 || p > 1.0) throw ArgumentError("image_percentile: p outside [0,1]");
    std::vector<double> sorted(img.data);
    std::sort(sorted.begin(), sorted.end());
    double pos = p * static_cast<double>(sorted.size() - 1);
    size_t lo = static_cast<size_t>(pos);
    size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace polarfuse
