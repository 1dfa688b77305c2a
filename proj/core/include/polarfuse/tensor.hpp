// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarfuse/image.hpp"
#include "polarfuse/rng.hpp"

namespace polarfuse {

// Dense row-major tensor of doubles, rank 1..4. Rank 3 is (C, H, W),
// rank 4 is (B, C, H, W); those two layouts are the currency of the
// fusion and diffusion code.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s, double fill = 0.0);

    int rank() const { return static_cast<int>(shape.size()); }
    long numel() const { return static_cast<long>(data.size()); }
    int dim(int i) const { return shape[static_cast<size_t>(i)]; }
    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    // Rank-2 (rows, cols) access.
    double& at(int i, int j) { return data[static_cast<size_t>(i) * shape[1] + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * shape[1] + j]; }

    // Rank-3 (C, H, W) access.
    double& at(int c, int y, int x) {
        return data[(static_cast<size_t>(c) * shape[1] + y) * shape[2] + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<size_t>(c) * shape[1] + y) * shape[2] + x];
    }

    // Rank-4 (B, C, H, W) access.
    double& at(int b, int c, int y, int x) {
        return data[((static_cast<size_t>(b) * shape[1] + c) * shape[2] + y) * shape[3] + x];
    }
    double at(int b, int c, int y, int x) const {
        return data[((static_cast<size_t>(b) * shape[1] + c) * shape[2] + y) * shape[3] + x];
    }

    static Tensor zeros_like(const Tensor& t) { return Tensor(t.shape); }
    static Tensor randn(std::vector<int> shape, const Rng& rng);

    // Throws NumericError naming `what` if any element is NaN/Inf.
    void check_finite(const std::string& what) const;
};

// Element-wise helpers used across modules.
Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator*(const Tensor& t, double s);
inline Tensor operator*(double s, const Tensor& t) { return t * s; }

double tensor_mean(const Tensor& t);

// Concatenate along the channel axis (rank 3 or 4; other dims must match).
Tensor concat_channels(const Tensor& a, const Tensor& b);

Tensor image_to_tensor(const Image& img);          // 1 x H x W
Image channel_to_image(const Tensor& t, int c);    // rank-3 slice

} // namespace polarfuse
