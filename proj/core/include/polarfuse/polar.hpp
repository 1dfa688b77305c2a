// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "polarfuse/image.hpp"
#include "polarfuse/tensor.hpp"

namespace polarfuse {

// Four co-registered intensity images behind linear polarizers at
// 0/45/90/135 degrees. All values finite and >= 0, identical sizes.
struct PolarizerStack {
    Image i0, i45, i90, i135;
    void validate() const; // throws DimensionError / IntegrityError
};

// First three Stokes components per pixel; S3 (circular) is assumed zero.
// Physical bound: sqrt(s1^2 + s2^2) <= s0.
struct StokesMap {
    Image s0, s1, s2;
    // Pixels whose (s1, s2) had to be shrunk onto the physical bound.
    long clamped_pixels = 0;
};

// Angle (radians, canonical [0, pi)) and degree of linear polarization.
// `valid` is false where the angle is undefined; there aolp == 0.
struct PolarizationMap {
    Image aolp;
    Image dolp;
    Mask valid;
};

// The 3-channel network-facing representation:
// [2*dolp - 1, cos(2*aolp), sin(2*aolp)], every element in [-1, 1].
struct EncodedPolarization {
    Tensor channels; // 3 x H x W
};

// Folds an angle into [0, pi).
double fold_angle_pi(double a);

// Transmitted intensity behind an ideal linear polarizer at angle phi_pol:
// i_un * (1 + dolp * cos(2*aolp - 2*phi_pol)) per pixel.
Image simulate_polarizer(const Image& i_un, const PolarizationMap& pol, double phi_pol);

// s0 = (i0+i45+i90+i135)/4, s1 = (i0-i90)/2, s2 = (i45-i135)/2.
// Noisy inputs can violate the physical bound; offending (s1,s2) pairs are
// scaled back onto it and counted in clamped_pixels.
StokesMap stokes_from_measurements(const PolarizerStack& stack);

// dolp = sqrt(s1^2+s2^2)/s0, aolp = atan2(s2, s1)/2 folded into [0, pi).
// Pixels with s0 below s0_min_frac * max(s0), or with (s1,s2) == (0,0),
// are marked invalid with aolp = 0.
PolarizationMap polarization_from_stokes(const StokesMap& stokes, double s0_min_frac = 1e-6);

// Invalid pixels emit [2*dolp - 1, 1, 0] (angle convention aolp = 0).
EncodedPolarization encode_polarization(const PolarizationMap& pol);

// Inverse of encode_polarization. The (cos, sin) pair must sit on the unit
// circle within `tol`, otherwise an IntegrityError is raised. All decoded
// pixels are marked valid; validity is not recoverable from the encoding.
PolarizationMap decode_polarization(const EncodedPolarization& enc, double tol = 1e-6);

} // namespace polarfuse
