#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "turbtrack/fields.hpp"

namespace turbtrack {

// Direction-to-color flow rendering. Hue encodes the vector angle on the HSV
// color wheel (0 deg = +x/red, 90 deg = +y/green-yellow, counterclockwise),
// saturation encodes magnitude normalized by the frame maximum (or a
// caller-supplied maximum), value is fixed at 1. Zero vectors render white.

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // row-major, 3 bytes per pixel
};

namespace detail {

inline void hsv_to_rgb(double h_deg, double s, double v, std::uint8_t* out) {
    double h = h_deg / 60.0;
    int i = static_cast<int>(std::floor(h)) % 6;
    if (i < 0) i += 6;
    double f = h - std::floor(h);
    double p = v * (1.0 - s);
    double q = v * (1.0 - s * f);
    double t = v * (1.0 - s * (1.0 - f));
    double r, g, b;
    switch (i) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
    out[0] = static_cast<std::uint8_t>(std::clamp(r, 0.0, 1.0) * 255.0 + 0.5);
    out[1] = static_cast<std::uint8_t>(std::clamp(g, 0.0, 1.0) * 255.0 + 0.5);
    out[2] = static_cast<std::uint8_t>(std::clamp(b, 0.0, 1.0) * 255.0 + 0.5);
}

}  // namespace detail

/// Renders one flow frame. max_magnitude <= 0 selects per-frame normalization.
inline RgbImage colorize_flow(const FlowField& flow, int frame, double max_magnitude = 0.0) {
    if (frame < 0 || frame >= flow.frames)
        throw validation_error("colorize_flow: frame " + std::to_string(frame) + " out of range");
    RgbImage img;
    img.width = flow.width;
    img.height = flow.height;
    img.data.resize(static_cast<std::size_t>(flow.width) * flow.height * 3);

    double maxmag = max_magnitude;
    if (maxmag <= 0.0) {
        for (int r = 0; r < flow.height; ++r)
            for (int c = 0; c < flow.width; ++c)
                maxmag = std::max(maxmag, std::hypot(flow.x(r, c, frame), flow.y(r, c, frame)));
    }
    if (maxmag <= 0.0) maxmag = 1.0;  // all-zero frame renders white

    for (int r = 0; r < flow.height; ++r) {
        for (int c = 0; c < flow.width; ++c) {
            double fx = flow.x(r, c, frame);
            double fy = flow.y(r, c, frame);
            double mag = std::hypot(fx, fy);
            double hue = std::atan2(fy, fx) * 180.0 / 3.14159265358979323846;
            if (hue < 0.0) hue += 360.0;
            double sat = std::min(mag / maxmag, 1.0);
            detail::hsv_to_rgb(hue, sat, 1.0, &img.data[(static_cast<std::size_t>(r) * flow.width + c) * 3]);
        }
    }
    return img;
}

}  // namespace turbtrack
