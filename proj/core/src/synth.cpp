// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polarfuse/errors.hpp"
#include "polarfuse/parallel.hpp"
#include "polarfuse/rng.hpp"

namespace polarfuse {

namespace {

constexpr double kUnitTol = 1e-9;

struct Hit {
    double t = std::numeric_limits<double>::infinity();
    Vec3 normal;
    const Material* material = nullptr;
};

bool intersect_sphere(const Vec3& origin, const Vec3& dir, const Primitive& p, Hit& hit) {
    Vec3 oc = origin - p.center;
    double b = dot(oc, dir);
    double c = dot(oc, oc) - p.radius * p.radius;
    double disc = b * b - c;
    if (disc < 0.0) return false;
    double sq = std::sqrt(disc);
    double t = -b - sq;
    if (t < 1e-9) t = -b + sq;
    if (t < 1e-9 || t >= hit.t) return false;
    hit.t = t;
    Vec3 pos = origin + dir * t;
    hit.normal = normalized(pos - p.center);
    hit.material = &p.material;
    return true;
}

bool intersect_plane(const Vec3& origin, const Vec3& dir, const Primitive& p, Hit& hit) {
    double denom = dot(dir, p.normal);
    if (std::abs(denom) < 1e-12) return false;
    double t = dot(p.point - origin, p.normal) / denom;
    if (t < 1e-9 || t >= hit.t) return false;
    hit.t = t;
    hit.normal = denom < 0.0 ? p.normal : -p.normal;
    hit.material = &p.material;
    return true;
}

} // namespace

void Scene::validate() const {
    for (const auto& p : primitives) {
        if (p.kind == Primitive::Kind::Plane && std::abs(norm(p.normal) - 1.0) > kUnitTol)
            throw IntegrityError("Scene: plane normal not unit length");
        if (p.kind == Primitive::Kind::Sphere && p.radius <= 0.0)
            throw IntegrityError("Scene: non-positive sphere radius");
        double n = p.material.refractive_index;
        if (!(n > 1.0 && n <= 3.0))
            throw IntegrityError("Scene: refractive index outside (1, 3]");
        if (p.material.specular_weight < 0.0 || p.material.specular_weight > 1.0)
            throw IntegrityError("Scene: specular weight outside [0, 1]");
    }
    if (std::abs(norm(light.to_light) - 1.0) > kUnitTol)
        throw IntegrityError("Scene: light direction not unit length");
    if (background_depth <= 0.0)
        throw IntegrityError("Scene: background depth must be positive");
    if (rgb_noise_sigma < 0.0)
        throw IntegrityError("Scene: negative rgb noise sigma");
}

void CameraIntrinsics::validate() const {
    if (fx <= 0.0 || fy <= 0.0) throw ArgumentError("CameraIntrinsics: focal lengths must be positive");
    if (!(cx > 0.0 && cx < width && cy > 0.0 && cy < height))
        throw ArgumentError("CameraIntrinsics: principal point outside the image");
    if (width <= 0 || height <= 0) throw ArgumentError("CameraIntrinsics: non-positive size");
}

RenderOutput render_scene(const Scene& scene, const CameraIntrinsics& cam, uint64_t seed) {
    scene.validate();
    cam.validate();
    int w = cam.width, h = cam.height;

    RenderOutput out;
    out.rgb = Tensor({3, h, w});
    out.depth = Image(w, h);
    out.normal = Tensor({3, h, w});
    out.pol.aolp = Image(w, h);
    out.pol.dolp = Image(w, h);
    out.pol.valid = Mask(w, h);
    out.mask = Mask(w, h);

    std::vector<long> clamped_rows(static_cast<size_t>(h), 0);
    uint64_t noise_key = hash_combine(seed, 0x52474E /* per-pixel rgb noise stream */);

    parallel_for(h, [&](long row) {
        int y = static_cast<int>(row);
        for (int x = 0; x < w; ++x) {
            Vec3 dir = normalized({(x + 0.5 - cam.cx) / cam.fx, (y + 0.5 - cam.cy) / cam.fy, 1.0});
            Hit hit;
            for (const auto& p : scene.primitives) {
                if (p.kind == Primitive::Kind::Sphere)
                    intersect_sphere({0, 0, 0}, dir, p, hit);
                else
                    intersect_plane({0, 0, 0}, dir, p, hit);
            }

            double rgb[3];
            if (hit.material) {
                Vec3 pos = dir * hit.t;
                Vec3 view = -dir; // toward the camera
                const Material& m = *hit.material;

                double ndl = std::max(0.0, dot(hit.normal, scene.light.to_light));
                Vec3 half = normalized(scene.light.to_light + view);
                double spec = m.specular_weight *
                              std::pow(std::max(0.0, dot(hit.normal, half)), 32.0) *
                              scene.light.intensity;
                for (int c = 0; c < 3; ++c)
                    rgb[c] = std::clamp(m.albedo[static_cast<size_t>(c)] *
                                            (0.12 + ndl * scene.light.intensity) + spec,
                                        0.0, 1.0);

                out.depth.at(y, x) = pos.z;
                out.normal.at(0, y, x) = hit.normal.x;
                out.normal.at(1, y, x) = hit.normal.y;
                out.normal.at(2, y, x) = hit.normal.z;

                PolarSample ps = polarization_from_normal(hit.normal, view, m.refractive_index,
                                                          m.specular_weight,
                                                          &clamped_rows[static_cast<size_t>(y)]);
                out.pol.dolp.at(y, x) = ps.dolp;
                bool ok = ps.dolp > 1e-9;
                out.pol.aolp.at(y, x) = ok ? ps.aolp : 0.0;
                out.pol.valid.at(y, x) = ok ? 1 : 0;
                out.mask.at(y, x) = 1;
            } else {
                for (double& c : rgb) c = 0.1;
                out.depth.at(y, x) = scene.background_depth;
                out.normal.at(2, y, x) = -1.0; // camera-facing
            }

            // Mild sensor noise on RGB only; geometry and polarization stay clean.
            uint64_t pix = static_cast<uint64_t>(y) * static_cast<uint64_t>(w) + static_cast<uint64_t>(x);
            for (int c = 0; c < 3; ++c) {
                double noisy = rgb[c] + scene.rgb_noise_sigma *
                                            rng_gaussian(noise_key, pix * 3 + static_cast<uint64_t>(c));
                out.rgb.at(c, y, x) = std::clamp(noisy, 0.0, 1.0);
            }
        }
    });

    for (long c : clamped_rows) out.clamped_incidence += c;
    return out;
}

EncodedPolarization inject_noise(const EncodedPolarization& enc, double beta, uint64_t seed) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ArgumentError("inject_noise: beta must be finite and >= 0");
    EncodedPolarization out = enc;
    if (beta == 0.0) return out;
    uint64_t key = hash_combine(seed, 0xBE7A);
    for (long i = 0; i < out.channels.numel(); ++i) {
        double v = out.channels.data[static_cast<size_t>(i)] +
                   beta * rng_gaussian(key, static_cast<uint64_t>(i));
        out.channels.data[static_cast<size_t>(i)] = std::clamp(v, -1.0, 1.0);
    }
    return out;
}

CameraIntrinsics default_camera(int image_size) {
    CameraIntrinsics cam;
    cam.width = cam.height = image_size;
    cam.fx = cam.fy = static_cast<double>(image_size);
    cam.cx = cam.cy = image_size / 2.0;
    return cam;
}

Scene random_scene(const SceneGenConfig& cfg, uint64_t seed, int sample_index) {
    Rng rng(hash_combine(seed, static_cast<uint64_t>(sample_index)), 0x5C3E);

    Scene scene;
    scene.background_depth = cfg.background_depth;
    scene.rgb_noise_sigma = cfg.rgb_noise_sigma;

    // Desk surface: matte plane half a metre below the optical axis,
    // tilted slightly so its polarization azimuth varies across samples.
    Primitive desk;
    desk.kind = Primitive::Kind::Plane;
    desk.point = {0.0, 0.55, 0.0};
    double tilt = rng.uniform(-0.12, 0.12);
    desk.normal = normalized({std::sin(tilt), -std::cos(tilt), rng.uniform(-0.08, 0.0)});
    desk.material.albedo = {rng.uniform(0.3, 0.6), rng.uniform(0.25, 0.5), rng.uniform(0.2, 0.45)};
    desk.material.specular_weight = rng.uniform(0.0, 0.1);
    desk.material.refractive_index = cfg.refractive_index;
    scene.primitives.push_back(desk);

    int n_spheres = rng.uniform_int(cfg.min_spheres, cfg.max_spheres);
    for (int i = 0; i < n_spheres; ++i) {
        Primitive s;
        s.kind = Primitive::Kind::Sphere;
        double z = rng.uniform(1.6, 4.0);
        double radius = rng.uniform(0.18, 0.45);
        double spread = 0.42 * z; // keep the sphere inside the frustum
        s.center = {rng.uniform(-spread, spread), rng.uniform(-0.25, 0.55 - radius), z};
        s.radius = radius;
        s.material.refractive_index = cfg.refractive_index;
        if (rng.uniform() < cfg.dark_glossy_fraction) {
            // Dark glossy: RGB shows little beyond the highlight, but the
            // specular Fresnel branch polarizes strongly.
            double a = rng.uniform(0.02, 0.08);
            s.material.albedo = {a, a, a * rng.uniform(0.8, 1.2)};
            s.material.specular_weight = rng.uniform(0.7, 0.95);
        } else {
            s.material.albedo = {rng.uniform(0.2, 0.9), rng.uniform(0.2, 0.9), rng.uniform(0.2, 0.9)};
            s.material.specular_weight = rng.uniform(0.0, 0.3);
        }
        scene.primitives.push_back(s);
    }

    double az = rng.uniform(-1.2, 1.2);
    scene.light.to_light = normalized({std::sin(az) * 0.6, -rng.uniform(0.6, 1.0), -rng.uniform(0.1, 0.5)});
    scene.light.intensity = rng.uniform(0.8, 1.1);
    return scene;
}

Scene demo_scene() {
    Scene scene;
    scene.background_depth = 10.0;

    Primitive desk;
    desk.kind = Primitive::Kind::Plane;
    desk.point = {0.0, 0.55, 0.0};
    desk.normal = normalized({0.05, -1.0, -0.02});
    desk.material.albedo = {0.45, 0.38, 0.3};
    desk.material.specular_weight = 0.05;
    scene.primitives.push_back(desk);

    Primitive matte;
    matte.kind = Primitive::Kind::Sphere;
    matte.center = {-0.7, 0.25, 2.4};
    matte.radius = 0.3;
    matte.material.albedo = {0.8, 0.25, 0.2};
    matte.material.specular_weight = 0.1;
    scene.primitives.push_back(matte);

    Primitive glossy;
    glossy.kind = Primitive::Kind::Sphere;
    glossy.center = {0.15, 0.2, 3.0};
    glossy.radius = 0.35;
    glossy.material.albedo = {0.04, 0.04, 0.05};
    glossy.material.specular_weight = 0.9;
    scene.primitives.push_back(glossy);

    Primitive glass;
    glass.kind = Primitive::Kind::Sphere;
    glass.center = {0.9, 0.3, 2.0};
    glass.radius = 0.25;
    glass.material.albedo = {0.3, 0.5, 0.7};
    glass.material.specular_weight = 0.6;
    glass.material.refractive_index = 2.0;
    scene.primitives.push_back(glass);

    scene.light.to_light = normalized({0.3, -0.85, -0.3});
    scene.light.intensity = 1.0;
    return scene;
}

} // namespace polarfuse
