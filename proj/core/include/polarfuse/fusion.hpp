// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "polarfuse/nn.hpp"
#include "polarfuse/rng.hpp"

namespace polarfuse {

// Two-conv confidence predictor: concat(z_rgb, z_pol) -> 3x3 conv (2C ->
// hidden) -> ReLU -> 3x3 conv (hidden -> 1) -> sigmoid. The final bias
// starts at 0 so the alpha-map opens near 0.5 instead of collapsing.
class ConfidencePredictor {
public:
    ConfidencePredictor(int latent_channels, int hidden = 16);

    void init(uint64_t seed);

    // alpha: 1 x H x W, every element strictly inside (0, 1).
    Tensor forward(const Tensor& z_rgb, const Tensor& z_pol);

    // Gradient w.r.t. both latent inputs given d(loss)/d(alpha);
    // parameter gradients accumulate into the conv parameters.
    struct InputGrads {
        Tensor z_rgb, z_pol;
    };
    InputGrads backward(const Tensor& grad_alpha);

    std::vector<Parameter*> parameters();
    void zero_grad();

    int latent_channels() const { return latent_channels_; }
    int hidden() const { return hidden_; }

private:
    int latent_channels_, hidden_;
    Conv2d conv1_, conv2_;
    ReLU relu_;
    Sigmoid sigmoid_;
};

// z_f = alpha * z_pol + (1 - alpha) * z_rgb; the single-channel alpha
// broadcasts across latent channels.
Tensor gated_fuse(const Tensor& z_rgb, const Tensor& z_pol, const Tensor& alpha);

struct GatedFuseGrads {
    Tensor z_rgb, z_pol, alpha;
};
GatedFuseGrads gated_fuse_backward(const Tensor& z_rgb, const Tensor& z_pol,
                                   const Tensor& alpha, const Tensor& grad_out);

enum class FusionStrategy { Confidence, Fixed, Random, Early };

FusionStrategy fusion_strategy_from_string(const std::string& s);
std::string to_string(FusionStrategy s);

// Uniform(0,1) alpha-map, re-drawn per invocation.
Tensor random_alpha(int h, int w, Rng& rng);

// Latent-space fusion for the non-early strategies. Confidence requires a
// model; Random requires an rng. alpha_out (optional) receives the map used.
Tensor fuse_latents(FusionStrategy strategy, const Tensor& z_rgb, const Tensor& z_pol,
                    ConfidencePredictor* model, Rng* rng, Tensor* alpha_out = nullptr);

} // namespace polarfuse
