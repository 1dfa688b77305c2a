// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "polarfuse/tensor.hpp"

namespace polarfuse {

// Trainable tensor with its gradient buffer.
struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad;

    Parameter() = default;
    Parameter(std::string n, std::vector<int> shape)
        : name(std::move(n)), value(shape), grad(std::move(shape)) {}

    void zero_grad() { std::fill(grad.data.begin(), grad.data.end(), 0.0); }
};

// He-uniform fan-in init, keyed by (seed, name) so construction order never
// changes the draw.
void he_uniform_init(Parameter& p, uint64_t seed);

// Differentiable block with a single tensor input and output. forward()
// caches whatever backward() needs; backward() accumulates parameter
// gradients (+=) and returns the gradient w.r.t. the input. Backward passes
// are hand-derived per operator and verified against the central
// finite-difference oracle in grad_check().
class Module {
public:
    virtual ~Module() = default;
    virtual Tensor forward(const Tensor& x) = 0;
    virtual Tensor backward(const Tensor& grad_out) = 0;
    virtual void collect_parameters(std::vector<Parameter*>& out) {}

    std::vector<Parameter*> parameters() {
        std::vector<Parameter*> out;
        collect_parameters(out);
        return out;
    }
    void zero_grad() {
        for (Parameter* p : parameters()) p->zero_grad();
    }
};

// Cross-correlation with zero padding; kernels 1x1 or 3x3. Accepts rank-3
// (C,H,W) or rank-4 (B,C,H,W) inputs.
class Conv2d : public Module {
public:
    Conv2d(std::string name, int in_ch, int out_ch, int ksize, int stride = 1, int padding = 0);

    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    void collect_parameters(std::vector<Parameter*>& out) override;

    void init(uint64_t seed) { he_uniform_init(weight, seed); }

    Parameter weight; // out_ch x in_ch x k x k
    Parameter bias;   // out_ch

private:
    int in_ch_, out_ch_, ksize_, stride_, padding_;
    Tensor input_;
};

class ReLU : public Module {
public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;

private:
    Tensor input_;
};

class SiLU : public Module {
public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;

private:
    Tensor input_;
};

class Sigmoid : public Module {
public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;

private:
    Tensor output_;
};

// 2x2 mean pooling; spatial dims must be even.
class AvgPool2 : public Module {
public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;

private:
    std::vector<int> in_shape_;
};

class UpsampleNearest2 : public Module {
public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
};

class Sequential : public Module {
public:
    Sequential() = default;
    void add(std::unique_ptr<Module> m) { layers_.push_back(std::move(m)); }

    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    void collect_parameters(std::vector<Parameter*>& out) override;

private:
    std::vector<std::unique_ptr<Module>> layers_;
};

// Mean squared error over all elements; gradient w.r.t. pred is
// 2 (pred - target) / N.
double mse_loss(const Tensor& pred, const Tensor& target);
Tensor mse_loss_grad(const Tensor& pred, const Tensor& target);

// Adam with bias correction. One state per parameter group; groups with
// different learning rates hold separate states.
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;

    struct Slot {
        Parameter* param;
        Tensor m, v;
    };
    std::vector<Slot> slots;

    explicit AdamState(double learning_rate = 1e-3) : lr(learning_rate) {}
    void register_params(const std::vector<Parameter*>& params);
};

void adam_step(AdamState& state);

// Central finite-difference check of every analytic gradient reachable from
// `module` at `input`: d(sum(r * out)) / d(theta) for a fixed random
// projection r. Reports the worst relative error.
struct GradCheckReport {
    double max_rel_error = 0.0;
    long n_checked = 0;
    bool passed(double tol) const { return max_rel_error < tol; }
};

GradCheckReport grad_check(Module& module, const Tensor& input, double h = 1e-5,
                           uint64_t seed = 0);

} // namespace polarfuse
