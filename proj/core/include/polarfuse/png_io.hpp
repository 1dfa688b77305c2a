// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "polarfuse/image.hpp"
#include "polarfuse/tensor.hpp"

namespace polarfuse {

// 8-bit PNG I/O. Values are mapped linearly between [0,1] doubles and
// [0,255] bytes; out-of-range values are clipped on write.

void write_png_rgb(const std::string& path, const Tensor& rgb); // 3 x H x W in [0,1]
void write_png_gray(const std::string& path, const Image& img); // [0,1]
void write_png_mask(const std::string& path, const Mask& mask);

Tensor read_png_rgb(const std::string& path);
Image read_png_gray(const std::string& path);
Mask read_png_mask(const std::string& path);

} // namespace polarfuse
