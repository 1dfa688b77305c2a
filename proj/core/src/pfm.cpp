// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/pfm.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "polarfuse/errors.hpp"

namespace polarfuse {

namespace {

void write_header(std::ofstream& f, const char* magic, int w, int h) {
    f << magic << "\n" << w << " " << h << "\n" << "-1.0" << "\n";
}

struct PfmHeader {
    bool color = false;
    int width = 0, height = 0;
    double scale = -1.0;
};

PfmHeader read_header(std::ifstream& f, const std::string& path) {
    PfmHeader hd;
    std::string magic;
    f >> magic;
    if (magic == "PF") hd.color = true;
    else if (magic == "Pf") hd.color = false;
    else throw IoError("not a PFM file: " + path);
    f >> hd.width >> hd.height >> hd.scale;
    if (!f || hd.width <= 0 || hd.height <= 0)
        throw IoError("bad PFM header: " + path);
    if (hd.scale >= 0.0)
        throw IoError("big-endian PFM not supported: " + path);
    f.get(); // the single whitespace byte before raster data
    return hd;
}

std::vector<float> read_raster(std::ifstream& f, const std::string& path, size_t count) {
    std::vector<float> raw(count);
    f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * sizeof(float)));
    if (!f) throw IoError("truncated PFM raster: " + path);
    return raw;
}

} // namespace

void write_pfm(const std::string& path, const Image& img) {
    if (img.width <= 0 || img.height <= 0) throw ArgumentError("write_pfm: empty image");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    write_header(f, "Pf", img.width, img.height);
    std::vector<float> row(static_cast<size_t>(img.width));
    for (int y = img.height - 1; y >= 0; --y) { // bottom-up
        for (int x = 0; x < img.width; ++x) row[static_cast<size_t>(x)] = static_cast<float>(img.at(y, x));
        f.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!f) throw IoError("write failed: " + path);
}

void write_pfm(const std::string& path, const Tensor& t) {
    if (t.rank() != 3 || t.dim(0) != 3)
        throw DimensionError("write_pfm: 3 x H x W tensor required for PF");
    int h = t.dim(1), w = t.dim(2);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    write_header(f, "PF", w, h);
    std::vector<float> row(static_cast<size_t>(w) * 3);
    for (int y = h - 1; y >= 0; --y) {
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                row[static_cast<size_t>(x) * 3 + static_cast<size_t>(c)] =
                    static_cast<float>(t.at(c, y, x));
        f.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!f) throw IoError("write failed: " + path);
}

Image read_pfm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    PfmHeader hd = read_header(f, path);
    if (hd.color) throw IoError("expected single-channel Pf: " + path);
    auto raw = read_raster(f, path, static_cast<size_t>(hd.width) * hd.height);
    Image img(hd.width, hd.height);
    for (int y = 0; y < hd.height; ++y) {
        int src_y = hd.height - 1 - y;
        for (int x = 0; x < hd.width; ++x)
            img.at(y, x) = raw[static_cast<size_t>(src_y) * hd.width + x];
    }
    return img;
}

Tensor read_pfm3(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    PfmHeader hd = read_header(f, path);
    if (!hd.color) throw IoError("expected 3-channel PF: " + path);
    auto raw = read_raster(f, path, static_cast<size_t>(hd.width) * hd.height * 3);
    Tensor t({3, hd.height, hd.width});
    for (int y = 0; y < hd.height; ++y) {
        int src_y = hd.height - 1 - y;
        for (int x = 0; x < hd.width; ++x)
            for (int c = 0; c < 3; ++c)
                t.at(c, y, x) = raw[(static_cast<size_t>(src_y) * hd.width + x) * 3 + static_cast<size_t>(c)];
    }
    return t;
}

bool pfm_is_color(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::string magic;
    f >> magic;
    if (magic == "PF") return true;
    if (magic == "Pf") return false;
    throw IoError("not a PFM file: " + path);
}

} // namespace polarfuse
