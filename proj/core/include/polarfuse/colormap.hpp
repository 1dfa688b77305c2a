// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polarfuse/image.hpp"
#include "polarfuse/tensor.hpp"

namespace polarfuse {

// Maps an image through a fixed perceptual colormap (viridis-like) after
// normalizing by the given range. Returns 3 x H x W in [0,1].
Tensor colorize(const Image& img, double vmin, double vmax);

} // namespace polarfuse
