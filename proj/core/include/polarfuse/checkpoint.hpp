// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "polarfuse/nn.hpp"

namespace polarfuse {

// Binary checkpoint: magic "PFCK", version u32, then per parameter
// (name length u32, name bytes, dtype tag u8 [0 = f64, 1 = f32],
//  rank u32, dims u32 each, raw little-endian data). A JSON sidecar at
// <path>.json carries the architecture hyperparameters.

void save_checkpoint(const std::string& path, const std::vector<Parameter*>& params,
                     const std::string& hyper_json);

struct LoadedCheckpoint {
    std::map<std::string, Tensor> tensors;
    std::string hyper_json;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

// Copies loaded tensors into matching parameters; throws IoError on a
// missing name and DimensionError on a shape mismatch.
void apply_checkpoint(const LoadedCheckpoint& ckpt, const std::vector<Parameter*>& params);

// FNV-1a 64 over the file bytes, as a hex string. Used to assert that two
// inference modes really share one set of weights.
std::string file_hash_hex(const std::string& path);

} // namespace polarfuse
