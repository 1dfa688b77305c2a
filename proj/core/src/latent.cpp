// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/latent.hpp"

#include "polarfuse/errors.hpp"

namespace polarfuse {

Tensor encode_latent(const Tensor& image, const LatentCodec& codec) {
    if (image.rank() != 3) throw DimensionError("encode_latent: rank-3 (C,H,W) tensor required");
    int r = codec.factor;
    if (r < 1) throw ArgumentError("encode_latent: codec factor must be >= 1");
    int c = image.dim(0), h = image.dim(1), w = image.dim(2);
    if (h % r != 0 || w % r != 0)
        throw DimensionError("encode_latent: spatial dims not divisible by codec factor");
    Tensor lat({c * r * r, h / r, w / r});
    for (int ci = 0; ci < c; ++ci)
        for (int dy = 0; dy < r; ++dy)
            for (int dx = 0; dx < r; ++dx) {
                int lc = (ci * r + dy) * r + dx;
                for (int y = 0; y < h / r; ++y)
                    for (int x = 0; x < w / r; ++x)
                        lat.at(lc, y, x) = image.at(ci, y * r + dy, x * r + dx);
            }
    return lat;
}

Tensor decode_latent(const Tensor& latent, const LatentCodec& codec) {
    if (latent.rank() != 3) throw DimensionError("decode_latent: rank-3 tensor required");
    int r = codec.factor;
    int lc_total = latent.dim(0);
    if (lc_total % (r * r) != 0)
        throw DimensionError("decode_latent: channel count not divisible by factor^2");
    int c = lc_total / (r * r);
    int h = latent.dim(1) * r, w = latent.dim(2) * r;
    Tensor img({c, h, w});
    for (int ci = 0; ci < c; ++ci)
        for (int dy = 0; dy < r; ++dy)
            for (int dx = 0; dx < r; ++dx) {
                int lc = (ci * r + dy) * r + dx;
                for (int y = 0; y < h / r; ++y)
                    for (int x = 0; x < w / r; ++x)
                        img.at(ci, y * r + dy, x * r + dx) = latent.at(lc, y, x);
            }
    return img;
}

} // namespace polarfuse
