// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/colormap.hpp"

#include <algorithm>
#include <cmath>

namespace polarfuse {

namespace {
// Viridis control points, evenly spaced in [0,1].
constexpr double kStops[][3] = {
    {0.267004, 0.004874, 0.329415}, {0.282623, 0.140926, 0.457517},
    {0.253935, 0.265254, 0.529983}, {0.206756, 0.371758, 0.553117},
    {0.163625, 0.471133, 0.558148}, {0.127568, 0.566949, 0.550556},
    {0.134692, 0.658636, 0.517649}, {0.266941, 0.748751, 0.440573},
    {0.477504, 0.821444, 0.318195}, {0.741388, 0.873449, 0.149561},
    {0.993248, 0.906157, 0.143936}};
constexpr int kNumStops = static_cast<int>(sizeof(kStops) / sizeof(kStops[0]));
} // namespace

Tensor colorize(const Image& img, double vmin, double vmax) {
    Tensor out({3, img.height, img.width});
    double range = vmax - vmin;
    if (range <= 0.0) range = 1.0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double u = std::clamp((img.at(y, x) - vmin) / range, 0.0, 1.0);
            double pos = u * (kNumStops - 1);
            int lo = std::min(static_cast<int>(pos), kNumStops - 2);
            double f = pos - lo;
            for (int c = 0; c < 3; ++c)
                out.at(c, y, x) = kStops[lo][c] * (1.0 - f) + kStops[lo + 1][c] * f;
        }
    }
    return out;
}

} // namespace polarfuse
