// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "polarfuse/checkpoint.hpp"
#include "polarfuse/errors.hpp"
#include "polarfuse/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace polarfuse {

namespace {

Tensor normalize_rgb(const Tensor& rgb01) {
    Tensor out = rgb01;
    for (double& v : out.data) v = 2.0 * v - 1.0;
    return out;
}

// Swap the two branch inputs per the modality ablation: the architecture is
// untouched, only the pair changes (full -> RGB+POL, rgb -> RGB+RGB,
// pol -> POL+POL).
void modality_pair(const std::string& modality, const Tensor& rgb_norm, const Tensor& pol_enc,
                   const Tensor** a, const Tensor** b) {
    if (modality == "full") {
        *a = &rgb_norm;
        *b = &pol_enc;
    } else if (modality == "rgb") {
        *a = &rgb_norm;
        *b = &rgb_norm;
    } else if (modality == "pol") {
        *a = &pol_enc;
        *b = &pol_enc;
    } else {
        throw ArgumentError("unknown modality: " + modality);
    }
}

json bundle_hyper_json(const ModelBundle& b) {
    const DenoiserConfig& d = b.denoiser->config();
    json j;
    j["target"] = b.target;
    j["modality"] = b.modality;
    j["fusion"] = to_string(b.fusion);
    j["codec_factor"] = b.codec.factor;
    j["confidence_hidden"] = b.confidence_hidden;
    j["zt_channels"] = d.zt_channels;
    j["cond_channels"] = d.cond_channels;
    j["width0"] = d.width0;
    j["width1"] = d.width1;
    j["width2"] = d.width2;
    j["time_dim"] = d.time_dim;
    return j;
}

} // namespace

ModelBundle ModelBundle::create(const std::string& target, const std::string& modality,
                                FusionStrategy fusion, int codec_factor, int confidence_hidden,
                                int width0, int width1, int width2, int time_dim, uint64_t seed) {
    if (target != "depth" && target != "normal")
        throw ArgumentError("target must be 'depth' or 'normal'");
    if (modality != "full" && modality != "rgb" && modality != "pol")
        throw ArgumentError("modality must be 'full', 'rgb' or 'pol'");

    ModelBundle b;
    b.target = target;
    b.modality = modality;
    b.fusion = fusion;
    b.codec.factor = codec_factor;
    b.confidence_hidden = confidence_hidden;

    int r2 = codec_factor * codec_factor;
    DenoiserConfig dcfg;
    dcfg.zt_channels = (target == "normal" ? 3 : 1) * r2;
    dcfg.cond_channels = 3 * r2;
    dcfg.width0 = width0;
    dcfg.width1 = width1;
    dcfg.width2 = width2;
    dcfg.time_dim = time_dim;

    b.denoiser = std::make_unique<DenoiserNet>(dcfg);
    b.denoiser->init(seed);
    if (fusion == FusionStrategy::Confidence) {
        b.confidence = std::make_unique<ConfidencePredictor>(dcfg.cond_channels, confidence_hidden);
        b.confidence->init(hash_combine(seed, 0xC0F));
    }
    return b;
}

void ModelBundle::save(const std::string& path) const {
    std::vector<Parameter*> params = const_cast<ModelBundle*>(this)->denoiser_params();
    if (confidence) {
        auto cp = const_cast<ModelBundle*>(this)->confidence_params();
        params.insert(params.end(), cp.begin(), cp.end());
    }
    save_checkpoint(path, params, bundle_hyper_json(*this).dump(2));
}

ModelBundle ModelBundle::load(const std::string& path) {
    LoadedCheckpoint ckpt = load_checkpoint(path);
    if (ckpt.hyper_json.empty())
        throw IoError("checkpoint sidecar missing: " + path + ".json");
    json j;
    try {
        j = json::parse(ckpt.hyper_json);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed checkpoint sidecar: ") + e.what());
    }

    ModelBundle b = create(j.at("target").get<std::string>(),
                           j.at("modality").get<std::string>(),
                           fusion_strategy_from_string(j.at("fusion").get<std::string>()),
                           j.at("codec_factor").get<int>(), j.at("confidence_hidden").get<int>(),
                           j.at("width0").get<int>(), j.at("width1").get<int>(),
                           j.at("width2").get<int>(), j.at("time_dim").get<int>(), 0);
    apply_checkpoint(ckpt, b.denoiser_params());
    if (b.confidence) apply_checkpoint(ckpt, b.confidence_params());
    return b;
}

Image normalize_depth(const Image& depth) {
    double lo = image_percentile(depth, 0.02);
    double hi = image_percentile(depth, 0.98);
    Image out(depth.width, depth.height);
    if (hi - lo < 1e-12) return out; // constant depth -> all zeros
    for (size_t i = 0; i < depth.size(); ++i) {
        double v = 2.0 * (depth.data[i] - lo) / (hi - lo) - 1.0;
        out.data[i] = std::clamp(v, -1.0, 1.0);
    }
    return out;
}

TrainSample prepare_sample(const SampleData& sample, const std::string& target) {
    TrainSample t;
    t.rgb_norm = normalize_rgb(sample.rgb);
    t.pol_enc = encode_polarization(sample.pol).channels;
    if (target == "normal") {
        t.target_norm = sample.normal;
        for (double& v : t.target_norm.data) v = std::clamp(v, -1.0, 1.0);
    } else {
        t.target_norm = image_to_tensor(normalize_depth(sample.depth));
    }
    return t;
}

std::vector<TrainSample> prepare_samples(const std::vector<SampleData>& samples,
                                         const std::string& target) {
    std::vector<TrainSample> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(prepare_sample(s, target));
    return out;
}

Trainer::Trainer(ModelBundle& bundle, const NoiseSchedule& schedule, const TrainConfig& cfg,
                 const std::vector<TrainSample>& data)
    : bundle_(bundle), schedule_(schedule), cfg_(cfg), data_(data),
      opt_unet_(cfg.lr_unet), opt_confidence_(cfg.lr_confidence),
      key_(hash_combine(cfg.seed, 0x7EA1)) {
    if (data_.empty()) throw ArgumentError("Trainer: empty dataset");
    if (cfg_.batch < 1 || cfg_.steps < 1) throw ArgumentError("Trainer: bad batch/steps");
    opt_unet_.register_params(bundle_.denoiser_params());
    if (bundle_.confidence) opt_confidence_.register_params(bundle_.confidence_params());
}

Trainer::StepStats Trainer::step(long step_index) {
    bundle_.denoiser->zero_grad();
    if (bundle_.confidence) bundle_.confidence->zero_grad();

    uint64_t step_key = hash_combine(key_, static_cast<uint64_t>(step_index));
    StepStats stats;
    double alpha_sum = 0.0;
    long alpha_count = 0;
    std::vector<int> drawn_t(static_cast<size_t>(cfg_.batch));
    double inv_batch = 1.0 / static_cast<double>(cfg_.batch);

    for (int slot = 0; slot < cfg_.batch; ++slot) {
        uint64_t slot_key = hash_combine(step_key, static_cast<uint64_t>(slot));
        const TrainSample& sample =
            data_[rng_bits(slot_key, 0x1D) % data_.size()];
        int t = static_cast<int>(rng_bits(slot_key, 0x71) % static_cast<uint64_t>(schedule_.T));
        drawn_t[static_cast<size_t>(slot)] = t;

        const Tensor* a = nullptr;
        const Tensor* b = nullptr;
        modality_pair(bundle_.modality, sample.rgb_norm, sample.pol_enc, &a, &b);

        Tensor cond, alpha, z_rgb, z_pol;
        bool gated = false;
        if (bundle_.fusion == FusionStrategy::Early) {
            cond = encode_latent(*a + *b, bundle_.codec);
        } else {
            z_rgb = encode_latent(*a, bundle_.codec);
            z_pol = encode_latent(*b, bundle_.codec);
            Rng fuse_rng(slot_key, 0xA1FA);
            cond = fuse_latents(bundle_.fusion, z_rgb, z_pol, bundle_.confidence.get(),
                                &fuse_rng, &alpha);
            gated = true;
        }
        if (alpha.numel() > 0) {
            for (double v : alpha.data) alpha_sum += v;
            alpha_count += alpha.numel();
        }

        Tensor z0 = encode_latent(sample.target_norm, bundle_.codec);
        Tensor eps = Tensor::randn(z0.shape, Rng(slot_key, 0xE5));
        Tensor z_t = forward_noising(z0, eps, t, schedule_);

        Tensor pred = bundle_.denoiser->forward(z_t, t, cond);
        stats.loss += mse_loss(pred, eps) * inv_batch;

        Tensor g = mse_loss_grad(pred, eps) * inv_batch;
        DenoiserNet::InputGrads dg = bundle_.denoiser->backward(g);

        if (gated && bundle_.fusion == FusionStrategy::Confidence) {
            GatedFuseGrads fg = gated_fuse_backward(z_rgb, z_pol, alpha, dg.cond);
            bundle_.confidence->backward(fg.alpha);
        }
    }

    if (!std::isfinite(stats.loss)) {
        std::string ts;
        for (int t : drawn_t) ts += std::to_string(t) + " ";
        double ma = alpha_count ? alpha_sum / static_cast<double>(alpha_count) : -1.0;
        throw NumericError("NaN loss at step " + std::to_string(step_index) +
                           "; t = [ " + ts + "]; mean alpha = " + std::to_string(ma));
    }

    adam_step(opt_unet_);
    if (bundle_.confidence) adam_step(opt_confidence_);

    if (alpha_count > 0) {
        stats.mean_alpha = alpha_sum / static_cast<double>(alpha_count);
        stats.has_alpha = true;
    }
    return stats;
}

TrainResult train_model(ModelBundle& bundle, const NoiseSchedule& schedule,
                        const TrainConfig& cfg, const std::vector<TrainSample>& data,
                        const std::string& out_dir, std::ostream* log) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create training output dir: " + out_dir);

    Trainer trainer(bundle, schedule, cfg, data);
    TrainResult result;
    result.final_checkpoint = (fs::path(out_dir) / "checkpoint_final.pfck").string();
    result.best_checkpoint = (fs::path(out_dir) / "checkpoint_best.pfck").string();

    double smoothed = 0.0;
    double best = std::numeric_limits<double>::infinity();

    for (long s = 1; s <= cfg.steps; ++s) {
        Trainer::StepStats st = trainer.step(s);
        if (s == 1) {
            result.first_loss = st.loss;
            smoothed = st.loss;
        } else {
            smoothed = 0.95 * smoothed + 0.05 * st.loss;
        }
        result.final_loss = st.loss;

        if (log && (s % cfg.log_every == 0 || s == 1 || s == cfg.steps)) {
            json line;
            line["step"] = s;
            line["loss"] = st.loss;
            line["mean_alpha"] = st.has_alpha ? json(st.mean_alpha) : json(nullptr);
            line["lr"] = cfg.lr_unet;
            *log << line.dump() << "\n";
        }
        if (s % 50 == 0 && smoothed < best) {
            best = smoothed;
            bundle.save(result.best_checkpoint);
        }
    }

    bundle.save(result.final_checkpoint);
    if (!fs::exists(result.best_checkpoint)) bundle.save(result.best_checkpoint);
    return result;
}

std::vector<int> inference_timesteps(const NoiseSchedule& schedule, const std::string& mode,
                                     int steps) {
    if (mode == "standard") {
        if (steps <= 0) steps = 50;
        std::vector<int> ts = leading_timesteps(schedule.T, steps);
        std::reverse(ts.begin(), ts.end());
        return ts;
    }
    if (mode == "accelerated") {
        if (steps <= 0) steps = 4;
        return trailing_timesteps(schedule.T, steps);
    }
    throw ArgumentError("unknown inference mode: " + mode);
}

InferResult infer(ModelBundle& bundle, const NoiseSchedule& schedule, const Tensor& rgb01,
                  const EncodedPolarization& pol, const InferOptions& opts) {
    if (rgb01.rank() != 3 || rgb01.dim(0) != 3)
        throw DimensionError("infer: rgb must be 3 x H x W");
    int r = bundle.codec.factor;
    if (rgb01.dim(1) % (4 * r) != 0 || rgb01.dim(2) % (4 * r) != 0)
        throw DimensionError("infer: image dims must be divisible by 4 * codec factor");

    Tensor rgb_norm = normalize_rgb(rgb01);
    Tensor pol_channels = pol.channels;
    if (opts.noise_beta > 0.0) {
        EncodedPolarization noisy = inject_noise(pol, opts.noise_beta, opts.noise_seed);
        pol_channels = noisy.channels;
    }

    const Tensor* a = nullptr;
    const Tensor* b = nullptr;
    modality_pair(bundle.modality, rgb_norm, pol_channels, &a, &b);

    InferResult result;
    Tensor cond;
    if (bundle.fusion == FusionStrategy::Early) {
        cond = encode_latent(*a + *b, bundle.codec);
    } else {
        Tensor z_rgb = encode_latent(*a, bundle.codec);
        Tensor z_pol = encode_latent(*b, bundle.codec);
        Rng fuse_rng(opts.seed, 0xF0FA);
        Tensor alpha;
        cond = fuse_latents(bundle.fusion, z_rgb, z_pol, bundle.confidence.get(), &fuse_rng, &alpha);
        if (alpha.numel() > 0) {
            result.alpha = alpha;
            result.has_alpha = true;
        }
    }

    int zt_ch = bundle.denoiser->config().zt_channels;
    Tensor z_init = Tensor::randn({zt_ch, cond.dim(1), cond.dim(2)}, Rng(opts.seed, 0xDD1));

    std::vector<int> ts = inference_timesteps(schedule, opts.mode, opts.steps);
    long calls_before = bundle.denoiser->forward_calls();
    DenoiseFn fn = [&](const Tensor& z_t, int t) { return bundle.denoiser->forward(z_t, t, cond); };
    Tensor z0 = ddim_sample(fn, ts, schedule, z_init);
    result.denoiser_calls = bundle.denoiser->forward_calls() - calls_before;

    Tensor decoded = decode_latent(z0, bundle.codec);
    if (bundle.target == "normal") {
        int h = decoded.dim(1), w = decoded.dim(2);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double nx = decoded.at(0, y, x), ny = decoded.at(1, y, x), nz = decoded.at(2, y, x);
                double n = std::sqrt(nx * nx + ny * ny + nz * nz);
                if (n < 1e-12) {
                    decoded.at(0, y, x) = 0.0;
                    decoded.at(1, y, x) = 0.0;
                    decoded.at(2, y, x) = -1.0;
                } else {
                    decoded.at(0, y, x) = nx / n;
                    decoded.at(1, y, x) = ny / n;
                    decoded.at(2, y, x) = nz / n;
                }
            }
    }
    result.prediction = decoded;
    return result;
}

} // namespace polarfuse
