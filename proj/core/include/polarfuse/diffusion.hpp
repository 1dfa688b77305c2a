// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "polarfuse/nn.hpp"
#include "polarfuse/rng.hpp"

namespace polarfuse {

// Scaled-linear beta schedule with optional zero-terminal-SNR rescaling:
// sqrt(alpha_bar) is remapped linearly so its last entry is exactly 0 while
// the first is unchanged, making sampling genuinely start from pure noise.
struct NoiseSchedule {
    int T = 0;
    std::vector<double> beta, alpha, alpha_bar;
    bool zero_snr = false;

    double sqrt_ab(int t) const;
    double sqrt_one_minus_ab(int t) const;
};

NoiseSchedule build_schedule(int T = 1000, double beta_start = 8.5e-4,
                             double beta_end = 1.2e-2, bool zero_snr = false);

// z_t = sqrt(alpha_bar_t) * z0 + sqrt(1 - alpha_bar_t) * eps.
Tensor forward_noising(const Tensor& z0, const Tensor& eps, int t, const NoiseSchedule& schedule);

// Few-step schedule anchored at the terminal timestep:
// t_i = round(T - 1 - i * T / steps), descending, always including T-1.
std::vector<int> trailing_timesteps(int T, int steps);

// Even subsequence anchored at 0: t_i = floor(i * T / steps), ascending.
// (The sampler visits it in reverse.)
std::vector<int> leading_timesteps(int T, int steps);

// Learned per-level bias from a fixed sinusoidal embedding of the timestep.
class TimeEmbed {
public:
    TimeEmbed(std::string name, int channels, int emb_dim);

    void init(uint64_t seed) { he_uniform_init(weight, seed); }
    void add_inplace(Tensor& feat, int t); // feat: C x H x W
    void accumulate_grad(const Tensor& grad_at_injection);
    void collect_parameters(std::vector<Parameter*>& out);

    Parameter weight; // C x emb_dim
    Parameter bias;   // C

private:
    int emb_dim_;
    std::vector<double> last_basis_;
};

struct DenoiserConfig {
    int zt_channels = 16;   // latent channels of the noisy target
    int cond_channels = 48; // latent channels of the fused conditioning
    int width0 = 32;
    int width1 = 48;
    int width2 = 64;
    int time_dim = 32;
};

// Toy U-Net: conv stem, two avgpool/upsample levels with skip connections,
// sinusoidal time embedding added per level, epsilon-prediction output with
// the same channel count as z_t. Operates on single samples (C, H, W);
// H and W must be divisible by 4.
class DenoiserNet {
public:
    explicit DenoiserNet(const DenoiserConfig& cfg);

    void init(uint64_t seed);

    Tensor forward(const Tensor& z_t, int t, const Tensor& cond);

    struct InputGrads {
        Tensor z_t, cond;
    };
    InputGrads backward(const Tensor& grad_out);

    std::vector<Parameter*> parameters();
    void zero_grad();

    const DenoiserConfig& config() const { return cfg_; }
    long forward_calls() const { return n_forward_; }
    long parameter_count();

private:
    DenoiserConfig cfg_;
    Conv2d conv_in_, conv_d1_, conv_d2_, conv_mid_, conv_u1_, conv_u2_, conv_out_;
    TimeEmbed temb0_, temb1_, temb2_, temb3_, temb4_;
    SiLU act0_, act1_, act2_, act_mid_, act3_, act4_;
    AvgPool2 pool1_, pool2_;
    UpsampleNearest2 up1_, up2_;
    long n_forward_ = 0;
};

// One denoiser evaluation: predicted epsilon for (z_t, t).
using DenoiseFn = std::function<Tensor(const Tensor& z_t, int t)>;

// Deterministic DDIM recursion (eta = 0) over a descending timestep list,
// written in x0-prediction form. At a zero-SNR terminal step the x0
// estimate falls back to the numerator z_t - eps_hat, avoiding the division
// by sqrt(alpha_bar) = 0. Returns the final x0 estimate.
Tensor ddim_sample(const DenoiseFn& eps_fn, const std::vector<int>& timesteps_desc,
                   const NoiseSchedule& schedule, const Tensor& z_init,
                   double eta = 0.0, Rng* rng = nullptr);

} // namespace polarfuse
