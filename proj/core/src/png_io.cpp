// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#include "polarfuse/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <memory>
#include <vector>

#include "polarfuse/errors.hpp"

namespace polarfuse {

namespace {

struct FileCloser {
    void operator()(FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

uint8_t to_byte(double v) {
    double scaled = v * 255.0 + 0.5;
    if (scaled < 0.0) scaled = 0.0;
    if (scaled > 255.0) scaled = 255.0;
    return static_cast<uint8_t>(scaled);
}

void write_png(const std::string& path, const std::vector<uint8_t>& bytes,
               int w, int h, int channels) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng write failed: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(static_cast<size_t>(h));
    for (int y = 0; y < h; ++y)
        rows[static_cast<size_t>(y)] =
            const_cast<png_bytep>(bytes.data() + static_cast<size_t>(y) * w * channels);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::vector<uint8_t> read_png(const std::string& path, int& w, int& h, int want_channels) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng read failed: " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_strip_alpha(png);
    if (want_channels == 3)
        png_set_gray_to_rgb(png);
    else
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    png_read_update_info(png, info);

    w = static_cast<int>(png_get_image_width(png, info));
    h = static_cast<int>(png_get_image_height(png, info));
    size_t rowbytes = png_get_rowbytes(png, info);
    std::vector<uint8_t> bytes(rowbytes * static_cast<size_t>(h));
    std::vector<png_bytep> rows(static_cast<size_t>(h));
    for (int y = 0; y < h; ++y)
        rows[static_cast<size_t>(y)] = bytes.data() + static_cast<size_t>(y) * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (rowbytes != static_cast<size_t>(w) * want_channels)
        throw IoError("unexpected PNG layout: " + path);
    return bytes;
}

} // namespace

void write_png_rgb(const std::string& path, const Tensor& rgb) {
    if (rgb.rank() != 3 || rgb.dim(0) != 3)
        throw DimensionError("write_png_rgb: 3 x H x W tensor required");
    int h = rgb.dim(1), w = rgb.dim(2);
    std::vector<uint8_t> bytes(static_cast<size_t>(w) * h * 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                bytes[(static_cast<size_t>(y) * w + x) * 3 + static_cast<size_t>(c)] =
                    to_byte(rgb.at(c, y, x));
    write_png(path, bytes, w, h, 3);
}

void write_png_gray(const std::string& path, const Image& img) {
    std::vector<uint8_t> bytes(img.size());
    for (size_t i = 0; i < img.size(); ++i) bytes[i] = to_byte(img.data[i]);
    write_png(path, bytes, img.width, img.height, 1);
}

void write_png_mask(const std::string& path, const Mask& mask) {
    std::vector<uint8_t> bytes(mask.size());
    for (size_t i = 0; i < mask.size(); ++i) bytes[i] = mask.data[i] ? 255 : 0;
    write_png(path, bytes, mask.width, mask.height, 1);
}

Tensor read_png_rgb(const std::string& path) {
    int w = 0, h = 0;
    auto bytes = read_png(path, w, h, 3);
    Tensor t({3, h, w});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                t.at(c, y, x) =
                    bytes[(static_cast<size_t>(y) * w + x) * 3 + static_cast<size_t>(c)] / 255.0;
    return t;
}

Image read_png_gray(const std::string& path) {
    int w = 0, h = 0;
    auto bytes = read_png(path, w, h, 1);
    Image img(w, h);
    for (size_t i = 0; i < img.size(); ++i) img.data[i] = bytes[i] / 255.0;
    return img;
}

Mask read_png_mask(const std::string& path) {
    int w = 0, h = 0;
    auto bytes = read_png(path, w, h, 1);
    Mask m(w, h);
    for (size_t i = 0; i < m.size(); ++i) m.data[i] = bytes[i] >= 128 ? 1 : 0;
    return m;
}

} // namespace polarfuse
