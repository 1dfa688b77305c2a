// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/fresnel.hpp"

#include <algorithm>
#include <cmath>

#include "polarfuse/errors.hpp"
#include "polarfuse/polar.hpp"

namespace polarfuse {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 normalized(const Vec3& v) {
    double n = norm(v);
    if (n <= 0.0) throw ArgumentError("normalized: zero-length vector");
    return v * (1.0 / n);
}

double fresnel_dolp_diffuse(double theta, double n) {
    double s2 = std::sin(theta);
    s2 *= s2;
    double c = std::cos(theta);
    double a = n - 1.0 / n;
    double b = n + 1.0 / n;
    double num = a * a * s2;
    double den = 2.0 + 2.0 * n * n - b * b * s2 + 4.0 * c * std::sqrt(n * n - s2);
    return den > 0.0 ? num / den : 0.0;
}

double fresnel_dolp_specular(double theta, double n) {
    double s = std::sin(theta);
    double s2 = s * s;
    double c = std::cos(theta);
    double num = 2.0 * s2 * c * std::sqrt(n * n - s2);
    double den = n * n - s2 - n * n * s2 + 2.0 * s2 * s2;
    if (den <= 0.0) return 1.0;
    return std::min(num / den, 1.0);
}

PolarSample polarization_from_normal(const Vec3& normal, const Vec3& view,
                                     double refractive_index, double specular_weight,
                                     long* clamped) {
    if (refractive_index <= 1.0)
        throw ArgumentError("polarization_from_normal: refractive index must exceed 1");
    double c = dot(normal, view);
    if (c < 0.0) {
        c = 0.0;
        if (clamped) ++*clamped;
    }
    double theta = std::acos(std::min(c, 1.0));

    double rho_d = fresnel_dolp_diffuse(theta, refractive_index);
    double rho_s = fresnel_dolp_specular(theta, refractive_index);
    PolarSample out;
    out.dolp = std::clamp((1.0 - specular_weight) * rho_d + specular_weight * rho_s, 0.0, 1.0);

    // Image-plane azimuth of the surface normal; undefined for a normal
    // pointing straight at the camera, where dolp is 0 anyway.
    double azimuth = (normal.x == 0.0 && normal.y == 0.0) ? 0.0 : std::atan2(normal.y, normal.x);
    double phi = fold_angle_pi(azimuth);
    if (specular_weight >= 0.5) phi = fold_angle_pi(phi + kPi / 2.0);
    out.aolp = phi;
    return out;
}

} // namespace polarfuse
