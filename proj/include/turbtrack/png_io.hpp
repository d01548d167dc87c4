#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "turbtrack/fields.hpp"

namespace turbtrack {

// PNG input/output. Input accepts 8- or 16-bit grayscale or RGB(A); RGB is
// reduced to luminance with the ITU-R 601 weights 0.299/0.587/0.114.
// Intensities are scaled to [0,1].

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // row-major, [0,1]
};

namespace detail {

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

struct PngWriteCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

}  // namespace detail

inline GrayImage read_png_gray(const std::string& path) {
    detail::PngReadCloser ctx;
    ctx.fp = std::fopen(path.c_str(), "rb");
    if (!ctx.fp) throw io_error("cannot open image file: " + path);

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, ctx.fp) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw decode_error("not a PNG file: " + path);

    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw decode_error("libpng init failed for: " + path);
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw decode_error("libpng init failed for: " + path);
    if (setjmp(png_jmpbuf(ctx.png)))
        throw decode_error("undecodable PNG file: " + path);

    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    int color_type = png_get_color_type(ctx.png, ctx.info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    color_type = png_get_color_type(ctx.png, ctx.info);
    int channels = png_get_channels(ctx.png, ctx.info);
    std::size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);

    std::vector<unsigned char> raw(rowbytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 r = 0; r < h; ++r) rows[r] = raw.data() + r * rowbytes;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    GrayImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.data.resize(static_cast<std::size_t>(w) * h);

    const double scale = bit_depth == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
    auto sample = [&](const unsigned char* p, int ch) -> double {
        if (bit_depth == 16) {
            // PNG stores 16-bit samples big-endian
            return (static_cast<unsigned>(p[2 * ch]) << 8 | p[2 * ch + 1]) * scale;
        }
        return p[ch] * scale;
    };

    const int bytes_per_sample = bit_depth == 16 ? 2 : 1;
    for (png_uint_32 r = 0; r < h; ++r) {
        const unsigned char* row = rows[r];
        for (png_uint_32 c = 0; c < w; ++c) {
            const unsigned char* px = row + static_cast<std::size_t>(c) * channels * bytes_per_sample;
            double v;
            if (channels >= 3)
                v = 0.299 * sample(px, 0) + 0.587 * sample(px, 1) + 0.114 * sample(px, 2);
            else
                v = sample(px, 0);
            img.data[static_cast<std::size_t>(r) * w + c] = std::clamp(v, 0.0, 1.0);
        }
    }
    return img;
}

inline void write_png_gray8(const std::string& path, int width, int height,
                            const std::vector<double>& data) {
    detail::PngWriteCloser ctx;
    ctx.fp = std::fopen(path.c_str(), "wb");
    if (!ctx.fp) throw io_error("cannot open PNG for writing: " + path);
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw io_error("libpng init failed for: " + path);
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw io_error("libpng init failed for: " + path);
    if (setjmp(png_jmpbuf(ctx.png))) throw io_error("PNG write failure: " + path);

    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, width, height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);

    std::vector<unsigned char> row(width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            double v = std::clamp(data[static_cast<std::size_t>(r) * width + c], 0.0, 1.0);
            row[c] = static_cast<unsigned char>(v * 255.0 + 0.5);
        }
        png_write_row(ctx.png, row.data());
    }
    png_write_end(ctx.png, nullptr);
}

inline void write_png_rgb8(const std::string& path, int width, int height,
                           const std::vector<std::uint8_t>& rgb) {
    detail::PngWriteCloser ctx;
    ctx.fp = std::fopen(path.c_str(), "wb");
    if (!ctx.fp) throw io_error("cannot open PNG for writing: " + path);
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw io_error("libpng init failed for: " + path);
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw io_error("libpng init failed for: " + path);
    if (setjmp(png_jmpbuf(ctx.png))) throw io_error("PNG write failure: " + path);

    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, width, height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    for (int r = 0; r < height; ++r)
        png_write_row(ctx.png, const_cast<png_bytep>(rgb.data() + static_cast<std::size_t>(r) * width * 3));
    png_write_end(ctx.png, nullptr);
}

namespace detail {

/// Shell-style glob on a filename: '*' matches any run, '?' one character.
inline bool glob_match(const std::string& pattern, const std::string& name) {
    std::size_t p = 0, n = 0, star = std::string::npos, mark = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = n;
        } else if (star != std::string::npos) {
            p = star + 1;
            n = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

}  // namespace detail

/// Loads all PNG files in `dir` whose filename matches `pattern`, ordered by
/// lexicographic filename. All images must agree on dimensions.
inline ImageSequence load_sequence(const std::string& dir, const std::string& pattern = "*.png") {
    namespace fs = std::filesystem;
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (detail::glob_match(pattern, name)) names.push_back(name);
    }
    if (ec) throw io_error("cannot read directory: " + dir);
    if (names.size() < 2)
        throw no_match_error("need at least 2 files matching '" + pattern + "' in " + dir +
                             " (found " + std::to_string(names.size()) + ")");
    std::sort(names.begin(), names.end());

    ImageSequence seq;
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::string path = (fs::path(dir) / names[i]).string();
        GrayImage img = read_png_gray(path);
        if (i == 0) {
            seq = ImageSequence(img.width, img.height, static_cast<int>(names.size()));
        } else if (img.width != seq.width || img.height != seq.height) {
            throw dimension_error("image dimensions " + std::to_string(img.width) + "x" +
                                  std::to_string(img.height) + " of " + path + " do not match " +
                                  std::to_string(seq.width) + "x" + std::to_string(seq.height));
        }
        std::copy(img.data.begin(), img.data.end(), seq.data.begin() + seq.frame_size() * i);
    }
    return seq;
}

}  // namespace turbtrack
