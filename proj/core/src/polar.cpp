// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/polar.hpp"

#include <cmath>

#include "polarfuse/errors.hpp"

namespace polarfuse {

namespace {
constexpr double kPi = 3.14159265358979323846;

void require_same_size(const Image& a, const Image& b, const char* what) {
    if (!a.same_size(b)) throw DimensionError(std::string(what) + ": image sizes differ");
}
} // namespace

double fold_angle_pi(double a) {
    a = std::fmod(a, kPi);
    if (a < 0.0) a += kPi;
    if (a >= kPi) a = 0.0;
    return a;
}

void PolarizerStack::validate() const {
    require_same_size(i0, i45, "PolarizerStack");
    require_same_size(i0, i90, "PolarizerStack");
    require_same_size(i0, i135, "PolarizerStack");
    for (const Image* img : {&i0, &i45, &i90, &i135}) {
        for (double v : img->data) {
            if (!std::isfinite(v)) throw IntegrityError("PolarizerStack: non-finite intensity");
            if (v < 0.0) throw IntegrityError("PolarizerStack: negative intensity");
        }
    }
}

Image simulate_polarizer(const Image& i_un, const PolarizationMap& pol, double phi_pol) {
    require_same_size(i_un, pol.dolp, "simulate_polarizer");
    require_same_size(i_un, pol.aolp, "simulate_polarizer");
    if (!std::isfinite(phi_pol)) throw ArgumentError("simulate_polarizer: phi_pol not finite");
    Image out(i_un.width, i_un.height);
    for (size_t i = 0; i < i_un.data.size(); ++i) {
        double rho = pol.dolp.data[i];
        double phi_a = pol.aolp.data[i];
        double v = i_un.data[i] * (1.0 + rho * std::cos(2.0 * phi_a - 2.0 * phi_pol));
        out.data[i] = v < 0.0 ? 0.0 : v; // rho <= 1 keeps this non-negative up to rounding
    }
    return out;
}

StokesMap stokes_from_measurements(const PolarizerStack& stack) {
    stack.validate();
    StokesMap s;
    s.s0 = Image(stack.i0.width, stack.i0.height);
    s.s1 = Image(stack.i0.width, stack.i0.height);
    s.s2 = Image(stack.i0.width, stack.i0.height);
    for (size_t i = 0; i < stack.i0.data.size(); ++i) {
        double s0 = 0.25 * (stack.i0.data[i] + stack.i45.data[i] + stack.i90.data[i] + stack.i135.data[i]);
        double s1 = 0.5 * (stack.i0.data[i] - stack.i90.data[i]);
        double s2 = 0.5 * (stack.i45.data[i] - stack.i135.data[i]);
        double lin = std::hypot(s1, s2);
        if (lin > s0 + 1e-9) {
            double scale = s0 > 0.0 ? s0 / lin : 0.0;
            s1 *= scale;
            s2 *= scale;
            ++s.clamped_pixels;
        }
        s.s0.data[i] = s0;
        s.s1.data[i] = s1;
        s.s2.data[i] = s2;
    }
    return s;
}

PolarizationMap polarization_from_stokes(const StokesMap& stokes, double s0_min_frac) {
    require_same_size(stokes.s0, stokes.s1, "polarization_from_stokes");
    require_same_size(stokes.s0, stokes.s2, "polarization_from_stokes");
    PolarizationMap pol;
    pol.aolp = Image(stokes.s0.width, stokes.s0.height);
    pol.dolp = Image(stokes.s0.width, stokes.s0.height);
    pol.valid = Mask(stokes.s0.width, stokes.s0.height);

    double s0_max = 0.0;
    for (double v : stokes.s0.data) s0_max = std::max(s0_max, v);
    double s0_min = s0_min_frac * s0_max;

    for (size_t i = 0; i < stokes.s0.data.size(); ++i) {
        double s0 = stokes.s0.data[i];
        double s1 = stokes.s1.data[i];
        double s2 = stokes.s2.data[i];
        double lin = std::hypot(s1, s2);
        double rho = s0 > 0.0 ? std::min(lin / s0, 1.0) : 0.0;
        bool ok = s0 >= s0_min && s0 > 0.0 && (s1 != 0.0 || s2 != 0.0);
        pol.dolp.data[i] = rho;
        pol.aolp.data[i] = ok ? fold_angle_pi(0.5 * std::atan2(s2, s1)) : 0.0;
        pol.valid.data[i] = ok ? 1 : 0;
    }
    return pol;
}

EncodedPolarization encode_polarization(const PolarizationMap& pol) {
    require_same_size(pol.aolp, pol.dolp, "encode_polarization");
    int h = pol.dolp.height, w = pol.dolp.width;
    EncodedPolarization enc;
    enc.channels = Tensor({3, h, w});
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double rho = pol.dolp.at(y, x);
            enc.channels.at(0, y, x) = 2.0 * rho - 1.0;
            if (pol.valid.at(y, x)) {
                double a2 = 2.0 * pol.aolp.at(y, x);
                enc.channels.at(1, y, x) = std::cos(a2);
                enc.channels.at(2, y, x) = std::sin(a2);
            } else {
                enc.channels.at(1, y, x) = 1.0;
                enc.channels.at(2, y, x) = 0.0;
            }
        }
    }
    return enc;
}

PolarizationMap decode_polarization(const EncodedPolarization& enc, double tol) {
    if (enc.channels.rank() != 3 || enc.channels.dim(0) != 3)
        throw DimensionError("decode_polarization: 3 x H x W tensor required");
    int h = enc.channels.dim(1), w = enc.channels.dim(2);
    PolarizationMap pol;
    pol.aolp = Image(w, h);
    pol.dolp = Image(w, h);
    pol.valid = Mask(w, h, 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double c = enc.channels.at(1, y, x);
            double s = enc.channels.at(2, y, x);
            if (std::abs(std::hypot(c, s) - 1.0) > tol)
                throw IntegrityError("decode_polarization: (cos, sin) pair off the unit circle");
            double rho = 0.5 * (enc.channels.at(0, y, x) + 1.0);
            pol.dolp.at(y, x) = std::min(std::max(rho, 0.0), 1.0);
            pol.aolp.at(y, x) = fold_angle_pi(0.5 * std::atan2(s, c));
        }
    }
    return pol;
}

} // namespace polarfuse
