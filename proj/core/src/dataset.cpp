// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/dataset.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "polarfuse/errors.hpp"
#include "polarfuse/pfm.hpp"
#include "polarfuse/png_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace polarfuse {

namespace {

json scene_to_json(const Scene& scene) {
    json j;
    j["background_depth"] = scene.background_depth;
    j["rgb_noise_sigma"] = scene.rgb_noise_sigma;
    j["light"] = {{"to_light", {scene.light.to_light.x, scene.light.to_light.y, scene.light.to_light.z}},
                  {"intensity", scene.light.intensity}};
    json prims = json::array();
    for (const auto& p : scene.primitives) {
        json pj;
        pj["kind"] = p.kind == Primitive::Kind::Sphere ? "sphere" : "plane";
        if (p.kind == Primitive::Kind::Sphere) {
            pj["center"] = {p.center.x, p.center.y, p.center.z};
            pj["radius"] = p.radius;
        } else {
            pj["point"] = {p.point.x, p.point.y, p.point.z};
            pj["normal"] = {p.normal.x, p.normal.y, p.normal.z};
        }
        pj["material"] = {{"albedo", p.material.albedo},
                          {"specular_weight", p.material.specular_weight},
                          {"refractive_index", p.material.refractive_index}};
        prims.push_back(pj);
    }
    j["primitives"] = prims;
    return j;
}

std::string sample_id(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "sample_%04d", index);
    return buf;
}

} // namespace

DatasetManifest make_dataset(const SceneGenConfig& cfg, int count,
                             const std::string& out_dir, uint64_t seed) {
    if (count < 1) throw ArgumentError("make_dataset: count must be >= 1");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create dataset directory: " + out_dir);

    DatasetManifest manifest;
    manifest.seed = seed;
    manifest.image_size = cfg.image_size;
    manifest.dir = out_dir;

    CameraIntrinsics cam = default_camera(cfg.image_size);
    json samples = json::array();

    for (int i = 0; i < count; ++i) {
        Scene scene = random_scene(cfg, seed, i);
        uint64_t render_seed = hash_combine(seed, static_cast<uint64_t>(i));
        RenderOutput render = render_scene(scene, cam, render_seed);

        std::string id = sample_id(i);
        fs::path dir = fs::path(out_dir) / id;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create sample directory: " + dir.string());

        ManifestEntry entry;
        entry.id = id;
        entry.rgb = id + "/rgb.png";
        entry.depth = id + "/depth.pfm";
        entry.normal = id + "/normal.pfm";
        entry.aolp = id + "/aolp.pfm";
        entry.dolp = id + "/dolp.pfm";
        entry.mask = id + "/mask.png";

        write_png_rgb((dir / "rgb.png").string(), render.rgb);
        write_pfm((dir / "depth.pfm").string(), render.depth);
        write_pfm((dir / "normal.pfm").string(), render.normal);
        write_pfm((dir / "aolp.pfm").string(), render.pol.aolp);
        write_pfm((dir / "dolp.pfm").string(), render.pol.dolp);
        write_png_mask((dir / "mask.png").string(), render.mask);

        manifest.samples.push_back(entry);

        json sj;
        sj["id"] = id;
        sj["files"] = {{"rgb", entry.rgb},     {"depth", entry.depth}, {"normal", entry.normal},
                       {"aolp", entry.aolp},   {"dolp", entry.dolp},   {"mask", entry.mask}};
        sj["scene_params"] = scene_to_json(scene);
        samples.push_back(sj);
    }

    json root;
    root["version"] = manifest.version;
    root["seed"] = seed;
    root["image_size"] = cfg.image_size;
    root["samples"] = samples;

    std::ofstream f(fs::path(out_dir) / "manifest.json");
    if (!f) throw IoError("cannot write manifest: " + out_dir);
    f << root.dump(2) << "\n";
    return manifest;
}

DatasetManifest load_manifest(const std::string& manifest_path) {
    std::ifstream f(manifest_path);
    if (!f) throw IoError("cannot open manifest: " + manifest_path);
    json root;
    try {
        f >> root;
    } catch (const json::exception& e) {
        throw IoError("malformed manifest " + manifest_path + ": " + e.what());
    }

    DatasetManifest manifest;
    manifest.version = root.value("version", 1);
    manifest.seed = root.value("seed", uint64_t{0});
    manifest.image_size = root.value("image_size", 0);
    manifest.dir = fs::path(manifest_path).parent_path().string();
    if (manifest.dir.empty()) manifest.dir = ".";

    for (const auto& sj : root.at("samples")) {
        ManifestEntry e;
        e.id = sj.at("id").get<std::string>();
        const auto& files = sj.at("files");
        e.rgb = files.at("rgb").get<std::string>();
        e.depth = files.at("depth").get<std::string>();
        e.normal = files.at("normal").get<std::string>();
        e.aolp = files.at("aolp").get<std::string>();
        e.dolp = files.at("dolp").get<std::string>();
        e.mask = files.at("mask").get<std::string>();
        for (const std::string* rel : {&e.rgb, &e.depth, &e.normal, &e.aolp, &e.dolp, &e.mask}) {
            fs::path p = fs::path(manifest.dir) / *rel;
            if (!fs::exists(p)) throw IoError("manifest references missing file: " + p.string());
        }
        manifest.samples.push_back(std::move(e));
    }
    return manifest;
}

SampleData load_sample(const DatasetManifest& manifest, size_t index) {
    if (index >= manifest.samples.size())
        throw ArgumentError("load_sample: index out of range");
    const ManifestEntry& e = manifest.samples[index];
    fs::path dir(manifest.dir);

    SampleData s;
    s.id = e.id;
    s.rgb = read_png_rgb((dir / e.rgb).string());
    s.depth = read_pfm((dir / e.depth).string());
    s.normal = read_pfm3((dir / e.normal).string());
    s.pol.aolp = read_pfm((dir / e.aolp).string());
    s.pol.dolp = read_pfm((dir / e.dolp).string());
    s.mask = read_png_mask((dir / e.mask).string());
    s.pol.valid = Mask(s.pol.dolp.width, s.pol.dolp.height);
    for (size_t i = 0; i < s.pol.valid.size(); ++i)
        s.pol.valid.data[i] = s.pol.dolp.data[i] > 1e-9 ? 1 : 0;
    return s;
}

std::vector<SampleData> load_all_samples(const DatasetManifest& manifest) {
    std::vector<SampleData> out;
    out.reserve(manifest.samples.size());
    for (size_t i = 0; i < manifest.samples.size(); ++i)
        out.push_back(load_sample(manifest, i));
    return out;
}

} // namespace polarfuse
