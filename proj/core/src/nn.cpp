// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/nn.hpp"

#include <algorithm>
#include <cmath>

#include "polarfuse/errors.hpp"
#include "polarfuse/rng.hpp"

namespace polarfuse {

namespace {

// Uniform view of rank-3 (implicit batch 1) and rank-4 inputs.
struct Bchw {
    int b, c, h, w;
    bool batched;
};

Bchw view_bchw(const Tensor& t, const char* what) {
    if (t.rank() == 3) return {1, t.dim(0), t.dim(1), t.dim(2), false};
    if (t.rank() == 4) return {t.dim(0), t.dim(1), t.dim(2), t.dim(3), true};
    throw DimensionError(std::string(what) + ": rank-3 or rank-4 tensor required");
}

std::vector<int> make_shape(const Bchw& v, int c, int h, int w) {
    if (v.batched) return {v.b, c, h, w};
    return {c, h, w};
}

uint64_t name_key(const std::string& name) {
    uint64_t k = 0xCBF29CE484222325ull;
    for (unsigned char ch : name) k = (k ^ ch) * 0x100000001B3ull;
    return k;
}

} // namespace

void he_uniform_init(Parameter& p, uint64_t seed) {
    long fan_in = 1;
    for (size_t i = 1; i < p.value.shape.size(); ++i) fan_in *= p.value.shape[i];
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    uint64_t key = hash_combine(seed, name_key(p.name));
    for (long i = 0; i < p.value.numel(); ++i)
        p.value.data[static_cast<size_t>(i)] =
            limit * (2.0 * rng_uniform(key, static_cast<uint64_t>(i)) - 1.0);
}

Conv2d::Conv2d(std::string name, int in_ch, int out_ch, int ksize, int stride, int padding)
    : weight(name + ".weight", {out_ch, in_ch, ksize, ksize}),
      bias(name + ".bias", {out_ch}),
      in_ch_(in_ch), out_ch_(out_ch), ksize_(ksize), stride_(stride), padding_(padding) {
    if (ksize != 1 && ksize != 3) throw ArgumentError("Conv2d: kernel must be 1x1 or 3x3");
    if (stride < 1) throw ArgumentError("Conv2d: stride must be >= 1");
    if (padding < 0) throw ArgumentError("Conv2d: negative padding");
}

Tensor Conv2d::forward(const Tensor& x) {
    Bchw v = view_bchw(x, "Conv2d");
    if (v.c != in_ch_) throw DimensionError("Conv2d: input channel mismatch");
    int oh = (v.h + 2 * padding_ - ksize_) / stride_ + 1;
    int ow = (v.w + 2 * padding_ - ksize_) / stride_ + 1;
    if (oh <= 0 || ow <= 0) throw DimensionError("Conv2d: kernel larger than padded input");

    input_ = x;
    Tensor out(make_shape(v, out_ch_, oh, ow));

    const double* xd = x.data.data();
    double* od = out.data.data();
    const double* wd = weight.value.data.data();
    size_t in_plane = static_cast<size_t>(v.h) * v.w;
    size_t out_plane = static_cast<size_t>(oh) * ow;

    for (int b = 0; b < v.b; ++b) {
        const double* xb = xd + static_cast<size_t>(b) * v.c * in_plane;
        double* ob = od + static_cast<size_t>(b) * out_ch_ * out_plane;
        for (int oc = 0; oc < out_ch_; ++oc) {
            double* oplane = ob + static_cast<size_t>(oc) * out_plane;
            double bv = bias.value.data[static_cast<size_t>(oc)];
            for (size_t i = 0; i < out_plane; ++i) oplane[i] = bv;
            for (int ic = 0; ic < in_ch_; ++ic) {
                const double* xplane = xb + static_cast<size_t>(ic) * in_plane;
                const double* wk = wd + ((static_cast<size_t>(oc) * in_ch_) + ic) * ksize_ * ksize_;
                for (int ky = 0; ky < ksize_; ++ky) {
                    for (int kx = 0; kx < ksize_; ++kx) {
                        double wv = wk[ky * ksize_ + kx];
                        if (wv == 0.0) continue;
                        for (int oy = 0; oy < oh; ++oy) {
                            int iy = oy * stride_ - padding_ + ky;
                            if (iy < 0 || iy >= v.h) continue;
                            const double* xrow = xplane + static_cast<size_t>(iy) * v.w;
                            double* orow = oplane + static_cast<size_t>(oy) * ow;
                            int ox0 = 0, ox1 = ow;
                            if (stride_ == 1) {
                                // valid ix range: 0 <= ox - padding_ + kx < w
                                ox0 = std::max(0, padding_ - kx);
                                ox1 = std::min(ow, v.w + padding_ - kx);
                                const double* xp = xrow - padding_ + kx;
                                for (int ox = ox0; ox < ox1; ++ox) orow[ox] += wv * xp[ox];
                            } else {
                                for (int ox = ox0; ox < ox1; ++ox) {
                                    int ix = ox * stride_ - padding_ + kx;
                                    if (ix < 0 || ix >= v.w) continue;
                                    orow[ox] += wv * xrow[ix];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
    Bchw v = view_bchw(input_, "Conv2d::backward");
    Bchw g = view_bchw(grad_out, "Conv2d::backward");
    int oh = g.h, ow = g.w;

    Tensor grad_in(input_.shape, 0.0);
    const double* gd = grad_out.data.data();
    const double* xd = input_.data.data();
    double* gid = grad_in.data.data();
    const double* wd = weight.value.data.data();
    double* gwd = weight.grad.data.data();
    size_t in_plane = static_cast<size_t>(v.h) * v.w;
    size_t out_plane = static_cast<size_t>(oh) * ow;

    for (int b = 0; b < v.b; ++b) {
        const double* xb = xd + static_cast<size_t>(b) * v.c * in_plane;
        double* gib = gid + static_cast<size_t>(b) * v.c * in_plane;
        const double* gb = gd + static_cast<size_t>(b) * out_ch_ * out_plane;
        for (int oc = 0; oc < out_ch_; ++oc) {
            const double* gplane = gb + static_cast<size_t>(oc) * out_plane;
            double bsum = 0.0;
            for (size_t i = 0; i < out_plane; ++i) bsum += gplane[i];
            bias.grad.data[static_cast<size_t>(oc)] += bsum;

            for (int ic = 0; ic < in_ch_; ++ic) {
                const double* xplane = xb + static_cast<size_t>(ic) * in_plane;
                double* giplane = gib + static_cast<size_t>(ic) * in_plane;
                size_t wbase = ((static_cast<size_t>(oc) * in_ch_) + ic) * ksize_ * ksize_;
                for (int ky = 0; ky < ksize_; ++ky) {
                    for (int kx = 0; kx < ksize_; ++kx) {
                        double wv = wd[wbase + ky * ksize_ + kx];
                        double wgrad = 0.0;
                        for (int oy = 0; oy < oh; ++oy) {
                            int iy = oy * stride_ - padding_ + ky;
                            if (iy < 0 || iy >= v.h) continue;
                            const double* grow = gplane + static_cast<size_t>(oy) * ow;
                            const double* xrow = xplane + static_cast<size_t>(iy) * v.w;
                            double* girow = giplane + static_cast<size_t>(iy) * v.w;
                            if (stride_ == 1) {
                                int ox0 = std::max(0, padding_ - kx);
                                int ox1 = std::min(ow, v.w + padding_ - kx);
                                const double* xp = xrow - padding_ + kx;
                                double* gip = girow - padding_ + kx;
                                for (int ox = ox0; ox < ox1; ++ox) {
                                    wgrad += grow[ox] * xp[ox];
                                    gip[ox] += wv * grow[ox];
                                }
                            } else {
                                for (int ox = 0; ox < ow; ++ox) {
                                    int ix = ox * stride_ - padding_ + kx;
                                    if (ix < 0 || ix >= v.w) continue;
                                    wgrad += grow[ox] * xrow[ix];
                                    girow[ix] += wv * grow[ox];
                                }
                            }
                        }
                        gwd[wbase + ky * ksize_ + kx] += wgrad;
                    }
                }
            }
        }
    }
    return grad_in;
}

void Conv2d::collect_parameters(std::vector<Parameter*>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
}

Tensor ReLU::forward(const Tensor& x) {
    input_ = x;
    Tensor out = x;
    for (double& v : out.data) v = v > 0.0 ? v : 0.0;
    return out;
}

Tensor ReLU::backward(const Tensor& grad_out) {
    Tensor g = grad_out;
    for (size_t i = 0; i < g.data.size(); ++i)
        if (input_.data[i] <= 0.0) g.data[i] = 0.0;
    return g;
}

Tensor SiLU::forward(const Tensor& x) {
    input_ = x;
    Tensor out = x;
    for (double& v : out.data) v = v / (1.0 + std::exp(-v));
    return out;
}

Tensor SiLU::backward(const Tensor& grad_out) {
    Tensor g = grad_out;
    for (size_t i = 0; i < g.data.size(); ++i) {
        double s = 1.0 / (1.0 + std::exp(-input_.data[i]));
        g.data[i] *= s * (1.0 + input_.data[i] * (1.0 - s));
    }
    return g;
}

Tensor Sigmoid::forward(const Tensor& x) {
    Tensor out = x;
    for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
    output_ = out;
    return out;
}

Tensor Sigmoid::backward(const Tensor& grad_out) {
    Tensor g = grad_out;
    for (size_t i = 0; i < g.data.size(); ++i) {
        double s = output_.data[i];
        g.data[i] *= s * (1.0 - s);
    }
    return g;
}

Tensor AvgPool2::forward(const Tensor& x) {
    Bchw v = view_bchw(x, "AvgPool2");
    if (v.h % 2 != 0 || v.w % 2 != 0)
        throw DimensionError("AvgPool2: spatial dims must be even");
    in_shape_ = x.shape;
    Tensor out(make_shape(v, v.c, v.h / 2, v.w / 2));
    int oh = v.h / 2, ow = v.w / 2;
    const double* xd = x.data.data();
    double* od = out.data.data();
    for (long p = 0; p < static_cast<long>(v.b) * v.c; ++p) {
        const double* xp = xd + static_cast<size_t>(p) * v.h * v.w;
        double* op = od + static_cast<size_t>(p) * oh * ow;
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                const double* r0 = xp + static_cast<size_t>(2 * oy) * v.w + 2 * ox;
                const double* r1 = r0 + v.w;
                op[static_cast<size_t>(oy) * ow + ox] = 0.25 * (r0[0] + r0[1] + r1[0] + r1[1]);
            }
    }
    return out;
}

Tensor AvgPool2::backward(const Tensor& grad_out) {
    Tensor grad_in(in_shape_, 0.0);
    Bchw v = view_bchw(grad_in, "AvgPool2::backward");
    int oh = v.h / 2, ow = v.w / 2;
    const double* gd = grad_out.data.data();
    double* gid = grad_in.data.data();
    for (long p = 0; p < static_cast<long>(v.b) * v.c; ++p) {
        const double* gp = gd + static_cast<size_t>(p) * oh * ow;
        double* gip = gid + static_cast<size_t>(p) * v.h * v.w;
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                double g = 0.25 * gp[static_cast<size_t>(oy) * ow + ox];
                double* r0 = gip + static_cast<size_t>(2 * oy) * v.w + 2 * ox;
                double* r1 = r0 + v.w;
                r0[0] += g; r0[1] += g; r1[0] += g; r1[1] += g;
            }
    }
    return grad_in;
}

Tensor UpsampleNearest2::forward(const Tensor& x) {
    Bchw v = view_bchw(x, "UpsampleNearest2");
    Tensor out(make_shape(v, v.c, v.h * 2, v.w * 2));
    const double* xd = x.data.data();
    double* od = out.data.data();
    for (long p = 0; p < static_cast<long>(v.b) * v.c; ++p) {
        const double* xp = xd + static_cast<size_t>(p) * v.h * v.w;
        double* op = od + static_cast<size_t>(p) * v.h * v.w * 4;
        for (int y = 0; y < v.h; ++y)
            for (int x2 = 0; x2 < v.w; ++x2) {
                double val = xp[static_cast<size_t>(y) * v.w + x2];
                double* r0 = op + static_cast<size_t>(2 * y) * (2 * v.w) + 2 * x2;
                double* r1 = r0 + 2 * v.w;
                r0[0] = val; r0[1] = val; r1[0] = val; r1[1] = val;
            }
    }
    return out;
}

Tensor UpsampleNearest2::backward(const Tensor& grad_out) {
    Bchw v = view_bchw(grad_out, "UpsampleNearest2::backward");
    if (v.h % 2 != 0 || v.w % 2 != 0)
        throw DimensionError("UpsampleNearest2::backward: odd grad dims");
    Tensor grad_in(make_shape(v, v.c, v.h / 2, v.w / 2));
    int ih = v.h / 2, iw = v.w / 2;
    const double* gd = grad_out.data.data();
    double* gid = grad_in.data.data();
    for (long p = 0; p < static_cast<long>(v.b) * v.c; ++p) {
        const double* gp = gd + static_cast<size_t>(p) * v.h * v.w;
        double* gip = gid + static_cast<size_t>(p) * ih * iw;
        for (int y = 0; y < ih; ++y)
            for (int x = 0; x < iw; ++x) {
                const double* r0 = gp + static_cast<size_t>(2 * y) * v.w + 2 * x;
                const double* r1 = r0 + v.w;
                gip[static_cast<size_t>(y) * iw + x] = r0[0] + r0[1] + r1[0] + r1[1];
            }
    }
    return grad_in;
}

Tensor Sequential::forward(const Tensor& x) {
    Tensor cur = x;
    for (auto& layer : layers_) cur = layer->forward(cur);
    return cur;
}

Tensor Sequential::backward(const Tensor& grad_out) {
    Tensor cur = grad_out;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) cur = (*it)->backward(cur);
    return cur;
}

void Sequential::collect_parameters(std::vector<Parameter*>& out) {
    for (auto& layer : layers_) layer->collect_parameters(out);
}

double mse_loss(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target)) throw DimensionError("mse_loss: shape mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < pred.data.size(); ++i) {
        double d = pred.data[i] - target.data[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pred.data.size());
}

Tensor mse_loss_grad(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target)) throw DimensionError("mse_loss_grad: shape mismatch");
    Tensor g = pred;
    double scale = 2.0 / static_cast<double>(pred.data.size());
    for (size_t i = 0; i < g.data.size(); ++i)
        g.data[i] = scale * (pred.data[i] - target.data[i]);
    return g;
}

void AdamState::register_params(const std::vector<Parameter*>& params) {
    for (Parameter* p : params)
        slots.push_back({p, Tensor(p->value.shape), Tensor(p->value.shape)});
}

void adam_step(AdamState& state) {
    ++state.step;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (auto& slot : state.slots) {
        Parameter& p = *slot.param;
        for (size_t i = 0; i < p.value.data.size(); ++i) {
            double g = p.grad.data[i];
            double m = slot.m.data[i] = state.beta1 * slot.m.data[i] + (1.0 - state.beta1) * g;
            double v = slot.v.data[i] = state.beta2 * slot.v.data[i] + (1.0 - state.beta2) * g * g;
            double mhat = m / bc1;
            double vhat = v / bc2;
            p.value.data[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

GradCheckReport grad_check(Module& module, const Tensor& input, double h, uint64_t seed) {
    Tensor x = input;
    Tensor out = module.forward(x);
    Tensor r = Tensor::randn(out.shape, Rng(seed, 0x6C0));

    auto loss_of = [&r](const Tensor& o) {
        double s = 0.0;
        for (size_t i = 0; i < o.data.size(); ++i) s += r.data[i] * o.data[i];
        return s;
    };

    module.zero_grad();
    Tensor analytic_in = module.backward(r);
    std::vector<Parameter*> params = module.parameters();
    std::vector<Tensor> analytic_params;
    analytic_params.reserve(params.size());
    for (Parameter* p : params) analytic_params.push_back(p->grad);

    GradCheckReport report;
    auto check_one = [&](double analytic, double fd) {
        double denom = std::max({std::abs(analytic), std::abs(fd), 1e-6});
        report.max_rel_error = std::max(report.max_rel_error, std::abs(analytic - fd) / denom);
        ++report.n_checked;
    };

    for (long i = 0; i < x.numel(); ++i) {
        double saved = x.data[static_cast<size_t>(i)];
        x.data[static_cast<size_t>(i)] = saved + h;
        double lp = loss_of(module.forward(x));
        x.data[static_cast<size_t>(i)] = saved - h;
        double lm = loss_of(module.forward(x));
        x.data[static_cast<size_t>(i)] = saved;
        check_one(analytic_in.data[static_cast<size_t>(i)], (lp - lm) / (2.0 * h));
    }

    for (size_t pi = 0; pi < params.size(); ++pi) {
        Parameter& p = *params[pi];
        for (long i = 0; i < p.value.numel(); ++i) {
            double saved = p.value.data[static_cast<size_t>(i)];
            p.value.data[static_cast<size_t>(i)] = saved + h;
            double lp = loss_of(module.forward(x));
            p.value.data[static_cast<size_t>(i)] = saved - h;
            double lm = loss_of(module.forward(x));
            p.value.data[static_cast<size_t>(i)] = saved;
            check_one(analytic_params[pi].data[static_cast<size_t>(i)], (lp - lm) / (2.0 * h));
        }
    }
    return report;
}

} // namespace polarfuse
