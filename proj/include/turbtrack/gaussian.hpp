#pragma once

#include <cmath>
#include <vector>

#include "turbtrack/common.hpp"

namespace turbtrack {

/// Normalized Gaussian taps truncated at 3*sigma (radius = ceil(3*sigma)).
inline std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) throw validation_error("gaussian_kernel: sigma must be > 0");
    int radius = static_cast<int>(std::ceil(3.0 * sigma));
    if (radius < 1) radius = 1;
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * (i / sigma) * (i / sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

inline int gaussian_radius(double sigma) {
    int r = static_cast<int>(std::ceil(3.0 * sigma));
    return r < 1 ? 1 : r;
}

namespace detail {

// 1D convolution along rows or columns of a single plane, replicate boundary.
inline void convolve_rows(const double* src, double* dst, int width, int height,
                          const std::vector<double>& k) {
    int radius = static_cast<int>(k.size() / 2);
    for (int r = 0; r < height; ++r) {
        const double* row = src + static_cast<std::size_t>(r) * width;
        double* out = dst + static_cast<std::size_t>(r) * width;
        for (int c = 0; c < width; ++c) {
            double acc = 0.0;
            for (int d = -radius; d <= radius; ++d) {
                int cc = c + d;
                if (cc < 0) cc = 0;
                if (cc >= width) cc = width - 1;
                acc += k[d + radius] * row[cc];
            }
            out[c] = acc;
        }
    }
}

inline void convolve_cols(const double* src, double* dst, int width, int height,
                          const std::vector<double>& k) {
    int radius = static_cast<int>(k.size() / 2);
    for (int c = 0; c < width; ++c) {
        for (int r = 0; r < height; ++r) {
            double acc = 0.0;
            for (int d = -radius; d <= radius; ++d) {
                int rr = r + d;
                if (rr < 0) rr = 0;
                if (rr >= height) rr = height - 1;
                acc += k[d + radius] * src[static_cast<std::size_t>(rr) * width + c];
            }
            dst[static_cast<std::size_t>(r) * width + c] = acc;
        }
    }
}

}  // namespace detail

/// Separable 2D Gaussian smoothing of one plane, replicate boundary.
/// sigma_x acts along columns (width), sigma_y along rows (height).
inline void gaussian_smooth_plane(const double* src, double* dst, int width, int height,
                                  double sigma_x, double sigma_y) {
    std::vector<double> kx = gaussian_kernel(sigma_x);
    std::vector<double> ky = gaussian_kernel(sigma_y);
    std::vector<double> tmp(static_cast<std::size_t>(width) * height);
    detail::convolve_rows(src, tmp.data(), width, height, kx);
    detail::convolve_cols(tmp.data(), dst, width, height, ky);
}

}  // namespace turbtrack
