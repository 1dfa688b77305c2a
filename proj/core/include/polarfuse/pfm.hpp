// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "polarfuse/image.hpp"
#include "polarfuse/tensor.hpp"

namespace polarfuse {

// Portable float map, de-facto standard layout: "Pf" (1 channel) or "PF"
// (3 channels), little-endian (scale field -1.0), rows stored bottom-up.
// Values are cast to float32 on write and widened on read.

void write_pfm(const std::string& path, const Image& img);
void write_pfm(const std::string& path, const Tensor& t); // 3 x H x W

Image read_pfm(const std::string& path);
Tensor read_pfm3(const std::string& path); // 3 x H x W

// Peeks at the header; true for "PF" (3-channel).
bool pfm_is_color(const std::string& path);

} // namespace polarfuse
