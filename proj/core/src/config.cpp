// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/config.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polarfuse/errors.hpp"

namespace fs = std::filesystem;

namespace polarfuse {

namespace {

struct SchemaEntry {
    const char* key; // "section.key"
    const char* def;
};

// Full-scale reference values (20000 steps, batch 32, lr 3e-5 cosine for
// the U-Net, 1e-4 fixed for the confidence predictor) are documented in the
// README; the defaults below are the desk-scale configuration.
constexpr std::array<SchemaEntry, 33> kSchema = {{
    {"dataset.image_size", "64"},
    {"dataset.count", "64"},
    {"dataset.seed", "0"},
    {"dataset.min_spheres", "1"},
    {"dataset.max_spheres", "3"},
    {"dataset.dark_glossy_fraction", "0.5"},
    {"dataset.refractive_index", "1.5"},
    {"dataset.background_depth", "10.0"},
    {"dataset.rgb_noise_sigma", "0.01"},

    {"model.codec_factor", "4"},
    {"model.confidence_hidden", "16"},
    {"model.width0", "32"},
    {"model.width1", "48"},
    {"model.width2", "64"},
    {"model.time_dim", "32"},

    {"schedule.timesteps", "1000"},
    {"schedule.beta_start", "8.5e-4"},
    {"schedule.beta_end", "1.2e-2"},
    {"schedule.zero_snr", "true"},

    {"train.dataset", "dataset/manifest.json"},
    {"train.steps", "2000"},
    {"train.batch", "8"},
    {"train.lr_unet", "3e-4"},
    {"train.lr_confidence", "1e-3"},
    {"train.target", "depth"},
    {"train.fusion", "confidence"},
    {"train.modality", "full"},
    {"train.seed", "0"},
    {"train.log_every", "10"},

    {"eval.dataset", "testset/manifest.json"},
    {"eval.mode", "standard"},
    {"eval.seed", "0"},
    {"eval.random_fusion_repeats", "10"},
}};

bool schema_has(const std::string& dotted) {
    for (const auto& e : kSchema)
        if (dotted == e.key) return true;
    return false;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

RunConfig::RunConfig() {
    for (const auto& e : kSchema) values_[e.key] = e.def;
}

void RunConfig::set_checked(const std::string& section, const std::string& key,
                            const std::string& value) {
    std::string dotted = section + "." + key;
    if (!schema_has(dotted))
        throw ArgumentError("unknown config key: " + dotted);
    values_[dotted] = value;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config: " + path);

    RunConfig cfg;
    cfg.base_dir_ = fs::path(path).parent_path().string();
    if (cfg.base_dir_.empty()) cfg.base_dir_ = ".";

    std::string line, section;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ArgumentError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (section.empty())
            throw ArgumentError(path + ":" + std::to_string(lineno) + ": key outside any [section]");
        cfg.set_checked(section, key, value);
    }
    return cfg;
}

void RunConfig::apply_override(const std::string& dotted_key, const std::string& value) {
    size_t dot = dotted_key.find('.');
    if (dot == std::string::npos)
        throw ArgumentError("override must look like section.key=value: " + dotted_key);
    set_checked(dotted_key.substr(0, dot), dotted_key.substr(dot + 1), value);
}

std::string RunConfig::get_string(const std::string& section, const std::string& key) const {
    auto it = values_.find(section + "." + key);
    if (it == values_.end()) throw ArgumentError("unknown config key: " + section + "." + key);
    return it->second;
}

int RunConfig::get_int(const std::string& section, const std::string& key) const {
    std::string v = get_string(section, key);
    try {
        size_t pos = 0;
        int out = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ArgumentError("config " + section + "." + key + ": not an integer: " + v);
    }
}

double RunConfig::get_double(const std::string& section, const std::string& key) const {
    std::string v = get_string(section, key);
    try {
        size_t pos = 0;
        double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ArgumentError("config " + section + "." + key + ": not a number: " + v);
    }
}

bool RunConfig::get_bool(const std::string& section, const std::string& key) const {
    std::string v = get_string(section, key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ArgumentError("config " + section + "." + key + ": not a boolean: " + v);
}

uint64_t RunConfig::get_seed(const std::string& section, const std::string& key) const {
    std::string v = get_string(section, key);
    try {
        size_t pos = 0;
        unsigned long long out = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ArgumentError("config " + section + "." + key + ": not a seed: " + v);
    }
}

std::string RunConfig::get_path(const std::string& section, const std::string& key) const {
    fs::path p(get_string(section, key));
    if (p.is_absolute()) return p.string();
    return (fs::path(base_dir_) / p).lexically_normal().string();
}

std::string RunConfig::serialize() const {
    // Group by section, preserving the schema order.
    std::ostringstream out;
    std::string current;
    for (const auto& e : kSchema) {
        std::string dotted(e.key);
        size_t dot = dotted.find('.');
        std::string section = dotted.substr(0, dot);
        std::string key = dotted.substr(dot + 1);
        if (section != current) {
            if (!current.empty()) out << "\n";
            out << "[" << section << "]\n";
            current = section;
        }
        out << key << " = " << values_.at(dotted) << "\n";
    }
    return out.str();
}

void RunConfig::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write config: " + path);
    f << serialize();
}

} // namespace polarfuse
