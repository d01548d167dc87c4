#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "turbtrack/fields.hpp"

namespace turbtrack {

// Flow file format "TFL1": magic "TFL1", little-endian uint32 width, height,
// frames, then frames*height*width records of two little-endian float32
// (vx, vy), frame-major, row-major. Values are quantized to float32 on write;
// a read/write round trip is bit-exact for float32-representable flows.

namespace detail {

inline void put_u32_le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32_le(std::istream& is, const std::string& path) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw truncated_error("flow file truncated in header: " + path);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void put_f32_le(std::ostream& os, float v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    put_u32_le(os, u);
}

}  // namespace detail

inline void write_flow(const FlowField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open flow file for writing: " + path);
    os.write("TFL1", 4);
    detail::put_u32_le(os, static_cast<std::uint32_t>(f.width));
    detail::put_u32_le(os, static_cast<std::uint32_t>(f.height));
    detail::put_u32_le(os, static_cast<std::uint32_t>(f.frames));
    for (std::size_t i = 0; i < f.size(); ++i) {
        detail::put_f32_le(os, static_cast<float>(f.vx[i]));
        detail::put_f32_le(os, static_cast<float>(f.vy[i]));
    }
    if (!os) throw io_error("write failure on flow file: " + path);
}

inline FlowField read_flow(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open flow file: " + path);
    char magic[4];
    if (!is.read(magic, 4))
        throw truncated_error("flow file shorter than magic: " + path);
    if (std::memcmp(magic, "TFL1", 4) != 0)
        throw bad_magic_error("not a TFL1 flow file: " + path);
    std::uint32_t w = detail::get_u32_le(is, path);
    std::uint32_t h = detail::get_u32_le(is, path);
    std::uint32_t n = detail::get_u32_le(is, path);
    FlowField f(static_cast<int>(w), static_cast<int>(h), static_cast<int>(n));
    std::size_t count = f.size();
    std::vector<unsigned char> buf(count * 8);
    if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
        throw truncated_error("flow file payload truncated: " + path);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t ux = static_cast<std::uint32_t>(buf[8 * i]) |
                           (static_cast<std::uint32_t>(buf[8 * i + 1]) << 8) |
                           (static_cast<std::uint32_t>(buf[8 * i + 2]) << 16) |
                           (static_cast<std::uint32_t>(buf[8 * i + 3]) << 24);
        std::uint32_t uy = static_cast<std::uint32_t>(buf[8 * i + 4]) |
                           (static_cast<std::uint32_t>(buf[8 * i + 5]) << 8) |
                           (static_cast<std::uint32_t>(buf[8 * i + 6]) << 16) |
                           (static_cast<std::uint32_t>(buf[8 * i + 7]) << 24);
        float fx, fy;
        std::memcpy(&fx, &ux, 4);
        std::memcpy(&fy, &uy, 4);
        f.vx[i] = fx;
        f.vy[i] = fy;
    }
    return f;
}

}  // namespace turbtrack
