// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "polarfuse/dataset.hpp"
#include "polarfuse/diffusion.hpp"
#include "polarfuse/fusion.hpp"
#include "polarfuse/latent.hpp"

namespace polarfuse {

// Denoiser + (optionally) confidence predictor + codec + task metadata.
// Only the confidence strategy carries a predictor; the other strategies
// have nothing to learn about fusion.
struct ModelBundle {
    std::string target = "depth";   // depth | normal
    std::string modality = "full";  // full | rgb | pol
    FusionStrategy fusion = FusionStrategy::Confidence;
    LatentCodec codec{4};
    int confidence_hidden = 16;
    std::unique_ptr<DenoiserNet> denoiser;
    std::unique_ptr<ConfidencePredictor> confidence;

    static ModelBundle create(const std::string& target, const std::string& modality,
                              FusionStrategy fusion, int codec_factor, int confidence_hidden,
                              int width0, int width1, int width2, int time_dim, uint64_t seed);

    void save(const std::string& path) const;
    static ModelBundle load(const std::string& path);

    std::vector<Parameter*> denoiser_params() { return denoiser->parameters(); }
    std::vector<Parameter*> confidence_params() {
        return confidence ? confidence->parameters() : std::vector<Parameter*>{};
    }

    int target_channels() const { return target == "normal" ? 3 : 1; }
};

// Training-ready view of one sample: everything in [-1, 1].
struct TrainSample {
    Tensor rgb_norm;    // 3 x H x W
    Tensor pol_enc;     // 3 x H x W
    Tensor target_norm; // 1 or 3 x H x W
};

TrainSample prepare_sample(const SampleData& sample, const std::string& target);
std::vector<TrainSample> prepare_samples(const std::vector<SampleData>& samples,
                                         const std::string& target);

// Depth maps are normalized per sample to [-1, 1] by their 2nd/98th
// percentiles; predictions are therefore affine-invariant.
Image normalize_depth(const Image& depth);

struct TrainConfig {
    int steps = 2000;            // reference full-scale value: 20000
    int batch = 8;               // reference full-scale value: 32
    double lr_unet = 3e-4;       // reference full-scale value: 3e-5, cosine-annealed
    double lr_confidence = 1e-3; // reference full-scale value: 1e-4, fixed
    std::string target = "depth";
    FusionStrategy fusion = FusionStrategy::Confidence;
    std::string modality = "full";
    uint64_t seed = 0;
    int log_every = 10;
};

// One optimizer step over a freshly drawn batch. Samples t uniformly in
// [0, T), draws eps ~ N(0, I), fuses per strategy, and backpropagates
// through the denoiser and (jointly) the confidence predictor.
class Trainer {
public:
    Trainer(ModelBundle& bundle, const NoiseSchedule& schedule, const TrainConfig& cfg,
            const std::vector<TrainSample>& data);

    struct StepStats {
        double loss = 0.0;
        double mean_alpha = 0.0;
        bool has_alpha = false;
    };
    StepStats step(long step_index);

private:
    ModelBundle& bundle_;
    const NoiseSchedule& schedule_;
    TrainConfig cfg_;
    const std::vector<TrainSample>& data_;
    AdamState opt_unet_, opt_confidence_;
    uint64_t key_;
};

struct TrainResult {
    double first_loss = 0.0;
    double final_loss = 0.0;
    std::string final_checkpoint;
    std::string best_checkpoint;
};

// Full training loop: JSON-lines log {step, loss, mean_alpha, lr}, final
// checkpoint, and a best checkpoint tracked by a smoothed loss.
TrainResult train_model(ModelBundle& bundle, const NoiseSchedule& schedule,
                        const TrainConfig& cfg, const std::vector<TrainSample>& data,
                        const std::string& out_dir, std::ostream* log = nullptr);

struct InferOptions {
    std::string mode = "standard"; // standard: 50-step leading DDIM; accelerated: 4-step trailing
    int steps = 0;                 // 0 = mode default
    uint64_t seed = 0;
    double noise_beta = 0.0;       // Gaussian stress on the polarization branch
    uint64_t noise_seed = 0;
};

struct InferResult {
    Tensor prediction; // depth: 1 x H x W affine-invariant in [-1,1]; normal: 3 x H x W unit
    Tensor alpha;      // present when confidence fusion produced one
    bool has_alpha = false;
    long denoiser_calls = 0;
};

InferResult infer(ModelBundle& bundle, const NoiseSchedule& schedule, const Tensor& rgb01,
                  const EncodedPolarization& pol, const InferOptions& opts);

// Timestep list an infer call will visit (descending), for a given mode.
std::vector<int> inference_timesteps(const NoiseSchedule& schedule, const std::string& mode,
                                     int steps);

} // namespace polarfuse
