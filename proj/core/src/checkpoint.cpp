// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "polarfuse/errors.hpp"

namespace polarfuse {

namespace {

constexpr char kMagic[4] = {'P', 'F', 'C', 'K'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ofstream& f, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    f.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t read_u32(std::ifstream& f) {
    unsigned char b[4];
    f.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

} // namespace

void save_checkpoint(const std::string& path, const std::vector<Parameter*>& params,
                     const std::string& hyper_json) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open checkpoint for writing: " + path);
    f.write(kMagic, 4);
    write_u32(f, kVersion);
    for (const Parameter* p : params) {
        write_u32(f, static_cast<uint32_t>(p->name.size()));
        f.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
        f.put(static_cast<char>(0)); // dtype tag: f64
        write_u32(f, static_cast<uint32_t>(p->value.shape.size()));
        for (int d : p->value.shape) write_u32(f, static_cast<uint32_t>(d));
        f.write(reinterpret_cast<const char*>(p->value.data.data()),
                static_cast<std::streamsize>(p->value.data.size() * sizeof(double)));
    }
    if (!f) throw IoError("checkpoint write failed: " + path);
    f.close();

    std::ofstream sidecar(path + ".json");
    if (!sidecar) throw IoError("cannot write checkpoint sidecar: " + path + ".json");
    sidecar << hyper_json << "\n";
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open checkpoint: " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("not a PFCK checkpoint: " + path);
    uint32_t version = read_u32(f);
    if (version != kVersion) throw IoError("unsupported checkpoint version in " + path);

    LoadedCheckpoint out;
    while (true) {
        uint32_t name_len = read_u32(f);
        if (f.eof()) break;
        if (!f) throw IoError("truncated checkpoint: " + path);
        std::string name(name_len, '\0');
        f.read(name.data(), name_len);
        int dtype = f.get();
        uint32_t rank = read_u32(f);
        if (!f || rank == 0 || rank > 4) throw IoError("corrupt checkpoint record: " + path);
        std::vector<int> shape(rank);
        size_t n = 1;
        for (uint32_t i = 0; i < rank; ++i) {
            shape[i] = static_cast<int>(read_u32(f));
            n *= static_cast<size_t>(shape[i]);
        }
        Tensor t(shape);
        if (dtype == 0) {
            f.read(reinterpret_cast<char*>(t.data.data()),
                   static_cast<std::streamsize>(n * sizeof(double)));
        } else if (dtype == 1) {
            std::vector<float> raw(n);
            f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n * sizeof(float)));
            for (size_t i = 0; i < n; ++i) t.data[i] = raw[i];
        } else {
            throw IoError("unknown dtype tag in checkpoint: " + path);
        }
        if (!f) throw IoError("truncated checkpoint tensor: " + path);
        out.tensors.emplace(std::move(name), std::move(t));
    }

    std::ifstream sidecar(path + ".json");
    if (sidecar) {
        std::string line, all;
        while (std::getline(sidecar, line)) all += line + "\n";
        out.hyper_json = all;
    }
    return out;
}

void apply_checkpoint(const LoadedCheckpoint& ckpt, const std::vector<Parameter*>& params) {
    for (Parameter* p : params) {
        auto it = ckpt.tensors.find(p->name);
        if (it == ckpt.tensors.end())
            throw IoError("checkpoint misses parameter: " + p->name);
        if (it->second.shape != p->value.shape)
            throw DimensionError("checkpoint shape mismatch for " + p->name);
        p->value = it->second;
    }
}

std::string file_hash_hex(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for hashing: " + path);
    uint64_t h = 0xCBF29CE484222325ull;
    char buf[4096];
    while (f) {
        f.read(buf, sizeof(buf));
        std::streamsize got = f.gcount();
        for (std::streamsize i = 0; i < got; ++i)
            h = (h ^ static_cast<unsigned char>(buf[i])) * 0x100000001B3ull;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

} // namespace polarfuse
