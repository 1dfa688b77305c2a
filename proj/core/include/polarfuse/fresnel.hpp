// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

namespace polarfuse {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
Vec3 normalized(const Vec3& v);

// Degree of linear polarization of diffusely reflected light at incidence
// angle theta for refractive index n (Fresnel transmission model).
double fresnel_dolp_diffuse(double theta, double n);

// Degree of linear polarization of specularly reflected light; reaches 1
// exactly at the Brewster angle atan(n).
double fresnel_dolp_specular(double theta, double n);

// Polarization state (dolp, aolp) of the light leaving a surface point with
// the given unit normal, seen along the unit `view` vector (pointing toward
// the camera). The two Fresnel branches are blended by the specular weight
// k_s on dolp; aolp takes the dominant branch's orientation: parallel to
// the normal's image-plane azimuth for diffuse, rotated by pi/2 for
// specular (k_s >= 0.5). Incidence angles numerically past pi/2 are clamped
// and counted via `clamped` when given.
struct PolarSample {
    double dolp = 0.0;
    double aolp = 0.0; // [0, pi)
};
PolarSample polarization_from_normal(const Vec3& normal, const Vec3& view,
                                     double refractive_index, double specular_weight,
                                     long* clamped = nullptr);

} // namespace polarfuse
