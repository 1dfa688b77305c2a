// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/tensor.hpp"

#include <cmath>

#include "polarfuse/errors.hpp"

namespace polarfuse {

Tensor::Tensor(std::vector<int> s, double fill) : shape(std::move(s)) {
    if (shape.empty() || shape.size() > 4)
        throw DimensionError("Tensor: rank must be 1..4");
    size_t n = 1;
    for (int d : shape) {
        if (d <= 0) throw DimensionError("Tensor: non-positive dimension");
        n *= static_cast<size_t>(d);
    }
    data.assign(n, fill);
}

Tensor Tensor::randn(std::vector<int> shape, const Rng& rng) {
    Tensor t(std::move(shape));
    for (long i = 0; i < t.numel(); ++i)
        t.data[static_cast<size_t>(i)] = rng_gaussian(rng.key(), static_cast<uint64_t>(i));
    return t;
}

void Tensor::check_finite(const std::string& what) const {
    for (double v : data) {
        if (!std::isfinite(v))
            throw NumericError("non-finite value in " + what);
    }
}

Tensor operator+(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw DimensionError("tensor add: shape mismatch");
    Tensor out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

Tensor operator-(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw DimensionError("tensor sub: shape mismatch");
    Tensor out = a;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
}

Tensor operator*(const Tensor& t, double s) {
    Tensor out = t;
    for (double& v : out.data) v *= s;
    return out;
}

double tensor_mean(const Tensor& t) {
    if (t.data.empty()) throw ArgumentError("tensor_mean: empty tensor");
    double sum = 0.0;
    for (double v : t.data) sum += v;
    return sum / static_cast<double>(t.data.size());
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    if (a.rank() != b.rank() || (a.rank() != 3 && a.rank() != 4))
        throw DimensionError("concat_channels: rank 3 or 4 tensors required");
    if (a.rank() == 3) {
        if (a.dim(1) != b.dim(1) || a.dim(2) != b.dim(2))
            throw DimensionError("concat_channels: spatial mismatch");
        Tensor out({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)});
        std::copy(a.data.begin(), a.data.end(), out.data.begin());
        std::copy(b.data.begin(), b.data.end(), out.data.begin() + a.numel());
        return out;
    }
    if (a.dim(0) != b.dim(0) || a.dim(2) != b.dim(2) || a.dim(3) != b.dim(3))
        throw DimensionError("concat_channels: batch/spatial mismatch");
    Tensor out({a.dim(0), a.dim(1) + b.dim(1), a.dim(2), a.dim(3)});
    size_t plane_a = static_cast<size_t>(a.dim(1)) * a.dim(2) * a.dim(3);
    size_t plane_b = static_cast<size_t>(b.dim(1)) * b.dim(2) * b.dim(3);
    for (int n = 0; n < a.dim(0); ++n) {
        std::copy(a.data.begin() + n * plane_a, a.data.begin() + (n + 1) * plane_a,
                  out.data.begin() + static_cast<size_t>(n) * (plane_a + plane_b));
        std::copy(b.data.begin() + n * plane_b, b.data.begin() + (n + 1) * plane_b,
                  out.data.begin() + static_cast<size_t>(n) * (plane_a + plane_b) + plane_a);
    }
    return out;
}

Tensor image_to_tensor(const Image& img) {
    Tensor t({1, img.height, img.width});
    std::copy(img.data.begin(), img.data.end(), t.data.begin());
    return t;
}

Image channel_to_image(const Tensor& t, int c) {
    if (t.rank() != 3) throw DimensionError("channel_to_image: rank-3 tensor required");
    if (c < 0 || c >= t.dim(0)) throw ArgumentError("channel_to_image: channel out of range");
    Image img(t.dim(2), t.dim(1));
    size_t plane = static_cast<size_t>(t.dim(1)) * t.dim(2);
    std::copy(t.data.begin() + c * plane, t.data.begin() + (c + 1) * plane, img.data.begin());
    return img;
}

} // namespace polarfuse
