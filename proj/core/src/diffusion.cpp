// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include "polarfuse/errors.hpp"

namespace polarfuse {

double NoiseSchedule::sqrt_ab(int t) const { return std::sqrt(alpha_bar[static_cast<size_t>(t)]); }
double NoiseSchedule::sqrt_one_minus_ab(int t) const {
    return std::sqrt(1.0 - alpha_bar[static_cast<size_t>(t)]);
}

NoiseSchedule build_schedule(int T, double beta_start, double beta_end, bool zero_snr) {
    if (T < 2) throw ArgumentError("build_schedule: T must be >= 2");
    if (!(beta_start > 0.0 && beta_start < beta_end && beta_end < 1.0))
        throw ArgumentError("build_schedule: need 0 < beta_start < beta_end < 1");

    NoiseSchedule s;
    s.T = T;
    s.zero_snr = zero_snr;
    s.beta.resize(static_cast<size_t>(T));
    s.alpha.resize(static_cast<size_t>(T));
    s.alpha_bar.resize(static_cast<size_t>(T));

    double lo = std::sqrt(beta_start), hi = std::sqrt(beta_end);
    double prod = 1.0;
    for (int t = 0; t < T; ++t) {
        double b = lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(T - 1);
        b *= b;
        s.beta[static_cast<size_t>(t)] = b;
        s.alpha[static_cast<size_t>(t)] = 1.0 - b;
        prod *= 1.0 - b;
        s.alpha_bar[static_cast<size_t>(t)] = prod;
    }

    if (zero_snr) {
        // Shift sqrt(alpha_bar) so the last entry is 0, rescale so the first
        // stays put, then square back.
        double s0 = std::sqrt(s.alpha_bar.front());
        double sT = std::sqrt(s.alpha_bar.back());
        double scale = s0 / (s0 - sT);
        for (double& ab : s.alpha_bar) {
            double v = (std::sqrt(ab) - sT) * scale;
            ab = v * v;
        }
        s.alpha_bar.back() = 0.0;
    }
    return s;
}

Tensor forward_noising(const Tensor& z0, const Tensor& eps, int t, const NoiseSchedule& schedule) {
    if (!z0.same_shape(eps)) throw DimensionError("forward_noising: shape mismatch");
    if (t < 0 || t >= schedule.T) throw ArgumentError("forward_noising: t out of range");
    double a = schedule.sqrt_ab(t);
    double b = schedule.sqrt_one_minus_ab(t);
    Tensor out = z0;
    for (size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = a * z0.data[i] + b * eps.data[i];
    return out;
}

std::vector<int> trailing_timesteps(int T, int steps) {
    if (steps < 1 || steps > T) throw ArgumentError("trailing_timesteps: need 1 <= steps <= T");
    std::vector<int> ts(static_cast<size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        double v = static_cast<double>(T) - 1.0 -
                   static_cast<double>(i) * static_cast<double>(T) / static_cast<double>(steps);
        ts[static_cast<size_t>(i)] = std::max(0, static_cast<int>(std::llround(v)));
    }
    return ts;
}

std::vector<int> leading_timesteps(int T, int steps) {
    if (steps < 1 || steps > T) throw ArgumentError("leading_timesteps: need 1 <= steps <= T");
    std::vector<int> ts(static_cast<size_t>(steps));
    for (int i = 0; i < steps; ++i)
        ts[static_cast<size_t>(i)] =
            static_cast<int>(static_cast<long long>(i) * T / steps);
    return ts;
}

TimeEmbed::TimeEmbed(std::string name, int channels, int emb_dim)
    : weight(name + ".weight", {channels, emb_dim}),
      bias(name + ".bias", {channels}),
      emb_dim_(emb_dim) {}

void TimeEmbed::add_inplace(Tensor& feat, int t) {
    int c = feat.dim(0), h = feat.dim(1), w = feat.dim(2);
    int half = emb_dim_ / 2;
    last_basis_.assign(static_cast<size_t>(emb_dim_), 0.0);
    for (int k = 0; k < half; ++k) {
        double freq = std::exp(-std::log(10000.0) * static_cast<double>(k) / half);
        last_basis_[static_cast<size_t>(k)] = std::sin(t * freq);
        last_basis_[static_cast<size_t>(half + k)] = std::cos(t * freq);
    }
    for (int ci = 0; ci < c; ++ci) {
        double v = bias.value.data[static_cast<size_t>(ci)];
        for (int e = 0; e < emb_dim_; ++e)
            v += weight.value.at(ci, e) * last_basis_[static_cast<size_t>(e)];
        double* plane = feat.data.data() + static_cast<size_t>(ci) * h * w;
        for (long i = 0; i < static_cast<long>(h) * w; ++i) plane[i] += v;
    }
}

void TimeEmbed::accumulate_grad(const Tensor& grad_at_injection) {
    int c = grad_at_injection.dim(0);
    long hw = static_cast<long>(grad_at_injection.dim(1)) * grad_at_injection.dim(2);
    for (int ci = 0; ci < c; ++ci) {
        const double* plane = grad_at_injection.data.data() + static_cast<size_t>(ci) * hw;
        double gsum = 0.0;
        for (long i = 0; i < hw; ++i) gsum += plane[i];
        bias.grad.data[static_cast<size_t>(ci)] += gsum;
        for (int e = 0; e < emb_dim_; ++e)
            weight.grad.at(ci, e) += gsum * last_basis_[static_cast<size_t>(e)];
    }
}

void TimeEmbed::collect_parameters(std::vector<Parameter*>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
}

namespace {

std::pair<Tensor, Tensor> split_channels(const Tensor& t, int first) {
    int c = t.dim(0), h = t.dim(1), w = t.dim(2);
    Tensor a({first, h, w}), b({c - first, h, w});
    size_t plane = static_cast<size_t>(h) * w;
    std::copy(t.data.begin(), t.data.begin() + static_cast<long>(first * plane), a.data.begin());
    std::copy(t.data.begin() + static_cast<long>(first * plane), t.data.end(), b.data.begin());
    return {std::move(a), std::move(b)};
}

} // namespace

DenoiserNet::DenoiserNet(const DenoiserConfig& cfg)
    : cfg_(cfg),
      conv_in_("denoiser.conv_in", cfg.zt_channels + cfg.cond_channels, cfg.width0, 3, 1, 1),
      conv_d1_("denoiser.conv_d1", cfg.width0, cfg.width1, 3, 1, 1),
      conv_d2_("denoiser.conv_d2", cfg.width1, cfg.width2, 3, 1, 1),
      conv_mid_("denoiser.conv_mid", cfg.width2, cfg.width2, 3, 1, 1),
      conv_u1_("denoiser.conv_u1", cfg.width2 + cfg.width1, cfg.width1, 3, 1, 1),
      conv_u2_("denoiser.conv_u2", cfg.width1 + cfg.width0, cfg.width0, 3, 1, 1),
      conv_out_("denoiser.conv_out", cfg.width0, cfg.zt_channels, 3, 1, 1),
      temb0_("denoiser.temb0", cfg.width0, cfg.time_dim),
      temb1_("denoiser.temb1", cfg.width1, cfg.time_dim),
      temb2_("denoiser.temb2", cfg.width2, cfg.time_dim),
      temb3_("denoiser.temb3", cfg.width1, cfg.time_dim),
      temb4_("denoiser.temb4", cfg.width0, cfg.time_dim) {}

void DenoiserNet::init(uint64_t seed) {
    conv_in_.init(seed);
    conv_d1_.init(seed);
    conv_d2_.init(seed);
    conv_mid_.init(seed);
    conv_u1_.init(seed);
    conv_u2_.init(seed);
    conv_out_.init(seed);
    temb0_.init(seed);
    temb1_.init(seed);
    temb2_.init(seed);
    temb3_.init(seed);
    temb4_.init(seed);
}

Tensor DenoiserNet::forward(const Tensor& z_t, int t, const Tensor& cond) {
    if (z_t.rank() != 3 || cond.rank() != 3)
        throw DimensionError("DenoiserNet: rank-3 inputs required");
    if (z_t.dim(0) != cfg_.zt_channels || cond.dim(0) != cfg_.cond_channels)
        throw DimensionError("DenoiserNet: channel mismatch");
    if (z_t.dim(1) % 4 != 0 || z_t.dim(2) % 4 != 0)
        throw DimensionError("DenoiserNet: spatial dims must be divisible by 4");
    ++n_forward_;

    Tensor x = concat_channels(z_t, cond);
    Tensor a = conv_in_.forward(x);
    temb0_.add_inplace(a, t);
    Tensor h0 = act0_.forward(a);

    Tensor b = conv_d1_.forward(pool1_.forward(h0));
    temb1_.add_inplace(b, t);
    Tensor h1 = act1_.forward(b);

    Tensor c = conv_d2_.forward(pool2_.forward(h1));
    temb2_.add_inplace(c, t);
    Tensor h2 = act2_.forward(c);

    Tensor m = act_mid_.forward(conv_mid_.forward(h2));

    Tensor u = conv_u1_.forward(concat_channels(up1_.forward(m), h1));
    temb3_.add_inplace(u, t);
    u = act3_.forward(u);

    Tensor v = conv_u2_.forward(concat_channels(up2_.forward(u), h0));
    temb4_.add_inplace(v, t);
    v = act4_.forward(v);

    return conv_out_.forward(v);
}

DenoiserNet::InputGrads DenoiserNet::backward(const Tensor& grad_out) {
    Tensor g = conv_out_.backward(grad_out);

    g = act4_.backward(g);
    temb4_.accumulate_grad(g);
    g = conv_u2_.backward(g);
    auto [g_up2, g_h0_skip] = split_channels(g, cfg_.width1);
    g = up2_.backward(g_up2);

    g = act3_.backward(g);
    temb3_.accumulate_grad(g);
    g = conv_u1_.backward(g);
    auto [g_up1, g_h1_skip] = split_channels(g, cfg_.width2);
    Tensor gm = up1_.backward(g_up1);

    gm = conv_mid_.backward(act_mid_.backward(gm));

    Tensor g2 = act2_.backward(gm);
    temb2_.accumulate_grad(g2);
    Tensor g_h1 = pool2_.backward(conv_d2_.backward(g2)) + g_h1_skip;

    Tensor g1 = act1_.backward(g_h1);
    temb1_.accumulate_grad(g1);
    Tensor g_h0 = pool1_.backward(conv_d1_.backward(g1)) + g_h0_skip;

    Tensor g0 = act0_.backward(g_h0);
    temb0_.accumulate_grad(g0);
    Tensor gx = conv_in_.backward(g0);

    auto [g_zt, g_cond] = split_channels(gx, cfg_.zt_channels);
    return {std::move(g_zt), std::move(g_cond)};
}

std::vector<Parameter*> DenoiserNet::parameters() {
    std::vector<Parameter*> out;
    for (Conv2d* c : {&conv_in_, &conv_d1_, &conv_d2_, &conv_mid_, &conv_u1_, &conv_u2_, &conv_out_})
        c->collect_parameters(out);
    for (TimeEmbed* te : {&temb0_, &temb1_, &temb2_, &temb3_, &temb4_})
        te->collect_parameters(out);
    return out;
}

void DenoiserNet::zero_grad() {
    for (Parameter* p : parameters()) p->zero_grad();
}

long DenoiserNet::parameter_count() {
    long n = 0;
    for (Parameter* p : parameters()) n += p->value.numel();
    return n;
}

Tensor ddim_sample(const DenoiseFn& eps_fn, const std::vector<int>& timesteps_desc,
                   const NoiseSchedule& schedule, const Tensor& z_init, double eta, Rng* rng) {
    if (timesteps_desc.empty()) throw ArgumentError("ddim_sample: empty timestep list");
    if (eta > 0.0 && !rng) throw ArgumentError("ddim_sample: eta > 0 needs an rng");

    Tensor z = z_init;
    Tensor x0;
    for (size_t i = 0; i < timesteps_desc.size(); ++i) {
        int t = timesteps_desc[i];
        if (t < 0 || t >= schedule.T) throw ArgumentError("ddim_sample: timestep out of range");
        double ab_t = schedule.alpha_bar[static_cast<size_t>(t)];
        double ab_prev = i + 1 < timesteps_desc.size()
                             ? schedule.alpha_bar[static_cast<size_t>(timesteps_desc[i + 1])]
                             : 1.0;

        Tensor eps = eps_fn(z, t);
        double sqrt_ab = std::sqrt(ab_t);
        double sqrt_1m = std::sqrt(1.0 - ab_t);

        x0 = Tensor(z.shape);
        if (sqrt_ab > 1e-12) {
            double inv = 1.0 / sqrt_ab;
            for (size_t k = 0; k < z.data.size(); ++k)
                x0.data[k] = (z.data[k] - sqrt_1m * eps.data[k]) * inv;
        } else {
            // zero-SNR terminal step: keep the numerator, skip the division
            for (size_t k = 0; k < z.data.size(); ++k)
                x0.data[k] = z.data[k] - eps.data[k];
        }

        double sigma = 0.0;
        if (eta > 0.0 && ab_t < 1.0 && ab_prev > 0.0) {
            sigma = eta * std::sqrt((1.0 - ab_prev) / (1.0 - ab_t)) *
                    std::sqrt(std::max(0.0, 1.0 - ab_t / ab_prev));
        }
        double dir_scale = std::sqrt(std::max(0.0, 1.0 - ab_prev - sigma * sigma));
        double sqrt_ab_prev = std::sqrt(ab_prev);
        for (size_t k = 0; k < z.data.size(); ++k)
            z.data[k] = sqrt_ab_prev * x0.data[k] + dir_scale * eps.data[k];
        if (sigma > 0.0)
            for (double& v : z.data) v += sigma * rng->gaussian();
    }
    return z; // final virtual step has alpha_bar 1, so z == x0 estimate
}

} // namespace polarfuse
