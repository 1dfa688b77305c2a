// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/fusion.hpp"

#include <algorithm>

#include "polarfuse/errors.hpp"

namespace polarfuse {

ConfidencePredictor::ConfidencePredictor(int latent_channels, int hidden)
    : latent_channels_(latent_channels), hidden_(hidden),
      conv1_("confidence.conv1", 2 * latent_channels, hidden, 3, 1, 1),
      conv2_("confidence.conv2", hidden, 1, 3, 1, 1) {}

void ConfidencePredictor::init(uint64_t seed) {
    conv1_.init(seed);
    conv2_.init(seed);
    // biases stay zero: sigmoid(small) keeps alpha near 0.5 at the start
}

Tensor ConfidencePredictor::forward(const Tensor& z_rgb, const Tensor& z_pol) {
    if (!z_rgb.same_shape(z_pol))
        throw DimensionError("predict_confidence: latent shapes differ");
    if (z_rgb.rank() != 3 || z_rgb.dim(0) != latent_channels_)
        throw DimensionError("predict_confidence: latent channel mismatch");
    Tensor x = concat_channels(z_rgb, z_pol);
    return sigmoid_.forward(conv2_.forward(relu_.forward(conv1_.forward(x))));
}

ConfidencePredictor::InputGrads ConfidencePredictor::backward(const Tensor& grad_alpha) {
    Tensor g = conv1_.backward(relu_.backward(conv2_.backward(sigmoid_.backward(grad_alpha))));
    InputGrads out;
    out.z_rgb = Tensor({latent_channels_, g.dim(1), g.dim(2)});
    out.z_pol = Tensor({latent_channels_, g.dim(1), g.dim(2)});
    size_t half = out.z_rgb.data.size();
    std::copy(g.data.begin(), g.data.begin() + static_cast<long>(half), out.z_rgb.data.begin());
    std::copy(g.data.begin() + static_cast<long>(half), g.data.end(), out.z_pol.data.begin());
    return out;
}

std::vector<Parameter*> ConfidencePredictor::parameters() {
    std::vector<Parameter*> out;
    conv1_.collect_parameters(out);
    conv2_.collect_parameters(out);
    return out;
}

void ConfidencePredictor::zero_grad() {
    for (Parameter* p : parameters()) p->zero_grad();
}

Tensor gated_fuse(const Tensor& z_rgb, const Tensor& z_pol, const Tensor& alpha) {
    if (!z_rgb.same_shape(z_pol)) throw DimensionError("gated_fuse: latent shapes differ");
    if (z_rgb.rank() != 3 || alpha.rank() != 3 || alpha.dim(0) != 1 ||
        alpha.dim(1) != z_rgb.dim(1) || alpha.dim(2) != z_rgb.dim(2))
        throw DimensionError("gated_fuse: alpha must be 1 x H x W matching the latents");
    Tensor out = z_rgb;
    int c = z_rgb.dim(0), h = z_rgb.dim(1), w = z_rgb.dim(2);
    for (int ci = 0; ci < c; ++ci)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double a = alpha.at(0, y, x);
                out.at(ci, y, x) = a * z_pol.at(ci, y, x) + (1.0 - a) * z_rgb.at(ci, y, x);
            }
    return out;
}

GatedFuseGrads gated_fuse_backward(const Tensor& z_rgb, const Tensor& z_pol,
                                   const Tensor& alpha, const Tensor& grad_out) {
    GatedFuseGrads g;
    g.z_rgb = Tensor(z_rgb.shape);
    g.z_pol = Tensor(z_pol.shape);
    g.alpha = Tensor(alpha.shape);
    int c = z_rgb.dim(0), h = z_rgb.dim(1), w = z_rgb.dim(2);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double a = alpha.at(0, y, x);
            double ga = 0.0;
            for (int ci = 0; ci < c; ++ci) {
                double go = grad_out.at(ci, y, x);
                g.z_pol.at(ci, y, x) = a * go;
                g.z_rgb.at(ci, y, x) = (1.0 - a) * go;
                ga += go * (z_pol.at(ci, y, x) - z_rgb.at(ci, y, x));
            }
            g.alpha.at(0, y, x) = ga;
        }
    return g;
}

FusionStrategy fusion_strategy_from_string(const std::string& s) {
    if (s == "confidence" || s == "ours") return FusionStrategy::Confidence;
    if (s == "fixed") return FusionStrategy::Fixed;
    if (s == "random") return FusionStrategy::Random;
    if (s == "early") return FusionStrategy::Early;
    throw ArgumentError("unknown fusion strategy: " + s);
}

std::string to_string(FusionStrategy s) {
    switch (s) {
        case FusionStrategy::Confidence: return "confidence";
        case FusionStrategy::Fixed: return "fixed";
        case FusionStrategy::Random: return "random";
        case FusionStrategy::Early: return "early";
    }
    return "?";
}

Tensor random_alpha(int h, int w, Rng& rng) {
    Tensor a({1, h, w});
    for (double& v : a.data)
        v = std::clamp(rng.uniform(), 1e-12, 1.0 - 1e-12);
    return a;
}

Tensor fuse_latents(FusionStrategy strategy, const Tensor& z_rgb, const Tensor& z_pol,
                    ConfidencePredictor* model, Rng* rng, Tensor* alpha_out) {
    switch (strategy) {
        case FusionStrategy::Confidence: {
            if (!model) throw ArgumentError("confidence fusion requires a predictor model");
            Tensor alpha = model->forward(z_rgb, z_pol);
            if (alpha_out) *alpha_out = alpha;
            return gated_fuse(z_rgb, z_pol, alpha);
        }
        case FusionStrategy::Fixed: {
            Tensor alpha({1, z_rgb.dim(1), z_rgb.dim(2)}, 0.5);
            if (alpha_out) *alpha_out = alpha;
            return gated_fuse(z_rgb, z_pol, alpha);
        }
        case FusionStrategy::Random: {
            if (!rng) throw ArgumentError("random fusion requires an rng");
            Tensor alpha = random_alpha(z_rgb.dim(1), z_rgb.dim(2), *rng);
            if (alpha_out) *alpha_out = alpha;
            return gated_fuse(z_rgb, z_pol, alpha);
        }
        case FusionStrategy::Early:
            throw ArgumentError("early fusion happens before encoding, not on latents");
    }
    throw ArgumentError("unreachable fusion strategy");
}

} // namespace polarfuse
