// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polarfuse/tensor.hpp"

namespace polarfuse {

// Exactly invertible space-to-depth codec standing in for a learned VAE:
// (C, H, W) <-> (C * r^2, H / r, W / r). decode(encode(x)) == x bit for bit,
// so latent-space properties are testable to machine precision.
struct LatentCodec {
    int factor = 4;
};

Tensor encode_latent(const Tensor& image, const LatentCodec& codec);
Tensor decode_latent(const Tensor& latent, const LatentCodec& codec);

} // namespace polarfuse
