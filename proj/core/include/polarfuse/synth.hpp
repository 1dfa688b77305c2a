// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "polarfuse/fresnel.hpp"
#include "polarfuse/polar.hpp"
#include "polarfuse/tensor.hpp"

namespace polarfuse {

struct Material {
    std::array<double, 3> albedo{0.5, 0.5, 0.5}; // RGB in [0,1]
    double specular_weight = 0.0;                // k_s in [0,1]
    double refractive_index = 1.5;               // (1, 3]
};

struct Primitive {
    enum class Kind { Sphere, Plane };
    Kind kind = Kind::Sphere;
    Vec3 center;            // sphere
    double radius = 1.0;    // sphere
    Vec3 point;             // plane
    Vec3 normal{0, 0, -1};  // plane, unit
    Material material;
};

struct DirectionalLight {
    Vec3 to_light{0, -1, 0}; // unit vector from surface toward the light
    double intensity = 1.0;
};

struct Scene {
    std::vector<Primitive> primitives;
    DirectionalLight light;
    double background_depth = 10.0;
    double rgb_noise_sigma = 0.01; // sensor noise on RGB only
    void validate() const;         // unit vectors, refractive indices in range
};

struct CameraIntrinsics {
    double fx = 0, fy = 0, cx = 0, cy = 0;
    int width = 0, height = 0;
    void validate() const;
};

// Per-pixel render: z-depth along the optical axis, camera-frame unit
// normals, Lambert + Blinn-Phong RGB, and the Fresnel polarization state.
// Background pixels carry the scene's background depth, a camera-facing
// normal, dolp 0 and mask 0.
struct RenderOutput {
    Tensor rgb;    // 3 x H x W in [0,1]
    Image depth;   // positive, meters
    Tensor normal; // 3 x H x W, unit on mask
    PolarizationMap pol;
    Mask mask;              // foreground
    long clamped_incidence = 0;
};

RenderOutput render_scene(const Scene& scene, const CameraIntrinsics& cam, uint64_t seed);

// x + beta * N(0, I) element-wise, hard-clipped to [-1, 1]. The unit-circle
// structure of the encoding deliberately does not survive: the perturbed
// signal feeds the latent encoder as-is.
EncodedPolarization inject_noise(const EncodedPolarization& enc, double beta, uint64_t seed);

// Procedural desk-scale scene family: a matte ground plane under 1..N
// spheres, a fraction of which are dark glossy (nearly invisible to RGB
// shading but strongly polarized).
struct SceneGenConfig {
    int image_size = 64;
    int min_spheres = 1;
    int max_spheres = 3;
    double dark_glossy_fraction = 0.5;
    double refractive_index = 1.5;
    double background_depth = 10.0;
    double rgb_noise_sigma = 0.01;
};

Scene random_scene(const SceneGenConfig& cfg, uint64_t seed, int sample_index);
CameraIntrinsics default_camera(int image_size);

// The bundled 3-sphere demo scene used by golden tests and the README walk-through.
Scene demo_scene();

} // namespace polarfuse
