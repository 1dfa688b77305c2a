// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarfuse/synth.hpp"

namespace polarfuse {

// One dataset sample on disk. File paths are relative to the manifest.
struct ManifestEntry {
    std::string id;
    std::string rgb, depth, normal, aolp, dolp, mask;
};

struct DatasetManifest {
    int version = 1;
    uint64_t seed = 0;
    int image_size = 0;
    std::vector<ManifestEntry> samples;
    std::string dir; // directory containing the manifest (set on load/write)
};

// Renders `count` procedural scenes and writes per-sample files
// (rgb.png, depth.pfm, normal.pfm, aolp.pfm, dolp.pfm, mask.png) plus
// manifest.json into out_dir. Deterministic for a fixed seed.
DatasetManifest make_dataset(const SceneGenConfig& cfg, int count,
                             const std::string& out_dir, uint64_t seed);

DatasetManifest load_manifest(const std::string& manifest_path);

// Fully loaded sample, ready for encoding.
struct SampleData {
    std::string id;
    Tensor rgb;    // 3 x H x W in [0,1]
    Image depth;
    Tensor normal; // 3 x H x W
    PolarizationMap pol;
    Mask mask;
};

SampleData load_sample(const DatasetManifest& manifest, size_t index);
std::vector<SampleData> load_all_samples(const DatasetManifest& manifest);

} // namespace polarfuse
