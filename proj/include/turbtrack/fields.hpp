#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "turbtrack/common.hpp"

namespace turbtrack {

// Canonical storage order for all volumetric data: row-major within a frame,
// frames contiguous. Index = (frame * height + row) * width + col.

/// Grayscale image sequence with intensities in [0,1].
struct ImageSequence {
    int width = 0;
    int height = 0;
    int frames = 0;
    std::vector<double> data;

    ImageSequence() = default;
    ImageSequence(int w, int h, int f)
        : width(w), height(h), frames(f),
          data(static_cast<std::size_t>(w) * h * f, 0.0) {}

    std::size_t index(int r, int c, int t) const {
        return (static_cast<std::size_t>(t) * height + r) * width + c;
    }
    double& at(int r, int c, int t) { return data[index(r, c, t)]; }
    double at(int r, int c, int t) const { return data[index(r, c, t)]; }

    std::size_t frame_size() const {
        return static_cast<std::size_t>(width) * height;
    }
    const double* frame_ptr(int t) const { return data.data() + frame_size() * t; }
    double* frame_ptr(int t) { return data.data() + frame_size() * t; }

    void validate() const {
        if (width < 8 || height < 8)
            throw dimension_error("ImageSequence: width and height must be >= 8");
        if (frames < 2)
            throw dimension_error("ImageSequence: at least 2 frames required");
        for (double v : data)
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                throw validation_error("ImageSequence: intensity outside [0,1]");
    }
};

/// Dense 2D+time displacement field, components in pixels/frame.
struct FlowField {
    int width = 0;
    int height = 0;
    int frames = 0;
    std::vector<double> vx;
    std::vector<double> vy;

    FlowField() = default;
    FlowField(int w, int h, int f)
        : width(w), height(h), frames(f),
          vx(static_cast<std::size_t>(w) * h * f, 0.0),
          vy(static_cast<std::size_t>(w) * h * f, 0.0) {}

    std::size_t index(int r, int c, int t) const {
        return (static_cast<std::size_t>(t) * height + r) * width + c;
    }
    double& x(int r, int c, int t) { return vx[index(r, c, t)]; }
    double x(int r, int c, int t) const { return vx[index(r, c, t)]; }
    double& y(int r, int c, int t) { return vy[index(r, c, t)]; }
    double y(int r, int c, int t) const { return vy[index(r, c, t)]; }

    std::size_t frame_size() const {
        return static_cast<std::size_t>(width) * height;
    }
    std::size_t size() const { return vx.size(); }

    bool finite() const {
        for (double v : vx)
            if (!std::isfinite(v)) return false;
        for (double v : vy)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool same_shape(const FlowField& o) const {
        return width == o.width && height == o.height && frames == o.frames;
    }

    bool operator==(const FlowField& o) const {
        return same_shape(o) && vx == o.vx && vy == o.vy;
    }
};

/// Flow encoded as a complex scalar field: real = vx, imaginary = vy.
struct ComplexField {
    int width = 0;
    int height = 0;
    int frames = 0;
    std::vector<std::complex<double>> data;

    ComplexField() = default;
    ComplexField(int w, int h, int f)
        : width(w), height(h), frames(f),
          data(static_cast<std::size_t>(w) * h * f) {}

    std::size_t index(int r, int c, int t) const {
        return (static_cast<std::size_t>(t) * height + r) * width + c;
    }
    std::complex<double>& at(int r, int c, int t) { return data[index(r, c, t)]; }
    std::complex<double> at(int r, int c, int t) const { return data[index(r, c, t)]; }
};

inline ComplexField to_complex(const FlowField& f) {
    ComplexField c(f.width, f.height, f.frames);
    for (std::size_t i = 0; i < f.size(); ++i)
        c.data[i] = {f.vx[i], f.vy[i]};
    return c;
}

inline FlowField to_flow(const ComplexField& c) {
    FlowField f(c.width, c.height, c.frames);
    for (std::size_t i = 0; i < c.data.size(); ++i) {
        f.vx[i] = c.data[i].real();
        f.vy[i] = c.data[i].imag();
    }
    return f;
}

/// Image-plane coordinates centered on the principal point. x runs along
/// columns and y along rows; for every grid size the coordinate arrays
/// average to zero exactly (integer coordinates for odd sizes, symmetric
/// half-integers for even ones). Focal length is expressed in pixels.
struct PixelGrid {
    int width = 0;
    int height = 0;
    double focal = 0.0;

    PixelGrid() = default;
    PixelGrid(int w, int h, double f) : width(w), height(h), focal(f) {
        if (f <= 0.0) throw validation_error("PixelGrid: focal length must be > 0");
    }

    /// Default focal length when the capture geometry is unknown.
    static PixelGrid with_default_focal(int w, int h) {
        return PixelGrid(w, h, static_cast<double>(w > h ? w : h));
    }

    double x(int col) const { return col - (width - 1) / 2.0; }
    double y(int row) const { return row - (height - 1) / 2.0; }
};

/// Per-pixel Euclidean norm sqrt(vx^2 + vy^2), same dimensions as the flow.
inline std::vector<double> flow_magnitude(const FlowField& f) {
    std::vector<double> m(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        m[i] = std::hypot(f.vx[i], f.vy[i]);
    return m;
}

}  // namespace turbtrack
