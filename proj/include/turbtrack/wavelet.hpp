#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "turbtrack/fields.hpp"

namespace turbtrack {

// Separable 3D multilevel orthogonal wavelet transform with periodic
// extension, applied to complex data (real filters act on real and imaginary
// parts jointly). Orthonormal filters + periodic boundary give an exactly
// unitary transform: Parseval holds and the inverse is exact to rounding.
//
// Inputs whose dimensions are not multiples of 2^levels are padded by
// periodic extension to the next admissible size; the inverse crops back.

struct WaveletSpec {
    std::string family = "db2";  // 4-tap Daubechies
    int levels = 0;              // 0 = auto: floor(log2(min dim)) - 1, min 1
    // extension is always periodic

    void validate() const {
        if (family != "db2" && family != "haar")
            throw validation_error("WaveletSpec: unknown family '" + family + "'");
        if (levels < 0) throw validation_error("WaveletSpec: levels must be >= 0");
    }
};

inline int auto_wavelet_levels(int width, int height, int frames) {
    int m = std::min(width, std::min(height, frames));
    int levels = 0;
    while ((2 << levels) <= m) ++levels;  // floor(log2(m))
    --levels;                             // one less than the maximum depth
    return std::max(1, levels);
}

struct WaveletCoeffs {
    int width = 0, height = 0, frames = 0;     // original dims
    int pw = 0, ph = 0, pf = 0;                // padded dims
    int levels = 0;
    std::string family;
    std::vector<std::complex<double>> data;    // padded volume, subbands in place

    double energy() const {
        double e = 0.0;
        for (const auto& z : data) e += std::norm(z);
        return e;
    }
};

namespace wav_detail {

inline const std::vector<double>& lowpass(const std::string& family) {
    static const std::vector<double> db2 = {
        0.48296291314469025, 0.83651630373746899, 0.22414386804185735, -0.12940952255092145};
    static const std::vector<double> haar = {0.70710678118654752, 0.70710678118654752};
    return family == "haar" ? haar : db2;
}

// Quadrature mirror: g[m] = (-1)^m h[taps-1-m]
inline std::vector<double> highpass(const std::vector<double>& h) {
    std::vector<double> g(h.size());
    for (std::size_t m = 0; m < h.size(); ++m)
        g[m] = ((m % 2 == 0) ? 1.0 : -1.0) * h[h.size() - 1 - m];
    return g;
}

// One periodic analysis step along a length-n (even) line: first half of the
// output holds approximation, second half detail.
inline void dwt_line(const std::complex<double>* x, std::complex<double>* out, int n,
                     const std::vector<double>& h, const std::vector<double>& g) {
    const int taps = static_cast<int>(h.size());
    const int half = n / 2;
    for (int k = 0; k < half; ++k) {
        std::complex<double> a{0.0, 0.0}, d{0.0, 0.0};
        for (int m = 0; m < taps; ++m) {
            int idx = (2 * k + m) % n;
            a += h[m] * x[idx];
            d += g[m] * x[idx];
        }
        out[k] = a;
        out[half + k] = d;
    }
}

inline void idwt_line(const std::complex<double>* coef, std::complex<double>* out, int n,
                      const std::vector<double>& h, const std::vector<double>& g) {
    const int taps = static_cast<int>(h.size());
    const int half = n / 2;
    for (int i = 0; i < n; ++i) out[i] = {0.0, 0.0};
    for (int k = 0; k < half; ++k) {
        for (int m = 0; m < taps; ++m) {
            int idx = (2 * k + m) % n;
            out[idx] += h[m] * coef[k] + g[m] * coef[half + k];
        }
    }
}

// Applies fn to every axis-aligned line of the (w,h,t) corner block of a
// padded volume with full dims (pw,ph,pf). axis: 0=x (cols), 1=y (rows), 2=t.
template <typename Fn>
void for_each_line(std::vector<std::complex<double>>& vol, int pw, int ph, int w, int h, int t,
                   int axis, Fn&& fn) {
    std::vector<std::complex<double>> line, result;
    auto at = [&](int r, int c, int f) -> std::complex<double>& {
        return vol[(static_cast<std::size_t>(f) * ph + r) * pw + c];
    };
    if (axis == 0) {
        line.resize(w);
        result.resize(w);
        for (int f = 0; f < t; ++f)
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < w; ++c) line[c] = at(r, c, f);
                fn(line.data(), result.data(), w);
                for (int c = 0; c < w; ++c) at(r, c, f) = result[c];
            }
    } else if (axis == 1) {
        line.resize(h);
        result.resize(h);
        for (int f = 0; f < t; ++f)
            for (int c = 0; c < w; ++c) {
                for (int r = 0; r < h; ++r) line[r] = at(r, c, f);
                fn(line.data(), result.data(), h);
                for (int r = 0; r < h; ++r) at(r, c, f) = result[r];
            }
    } else {
        line.resize(t);
        result.resize(t);
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                for (int f = 0; f < t; ++f) line[f] = at(r, c, f);
                fn(line.data(), result.data(), t);
                for (int f = 0; f < t; ++f) at(r, c, f) = result[f];
            }
    }
}

inline int pad_to_multiple(int n, int m) { return ((n + m - 1) / m) * m; }

}  // namespace wav_detail

/// Effective depth for a field: the requested level count reduced until every
/// dimension admits it (each dimension must be >= 2^levels before padding).
inline int effective_levels(int width, int height, int frames, const WaveletSpec& spec) {
    int levels = spec.levels > 0 ? spec.levels : auto_wavelet_levels(width, height, frames);
    int m = std::min(width, std::min(height, frames));
    while (levels > 1 && (1 << levels) > m) --levels;
    return levels;
}

inline WaveletCoeffs wavelet3d(const ComplexField& field, const WaveletSpec& spec) {
    spec.validate();
    WaveletCoeffs co;
    co.width = field.width;
    co.height = field.height;
    co.frames = field.frames;
    co.family = spec.family;
    co.levels = effective_levels(field.width, field.height, field.frames, spec);

    const int block = 1 << co.levels;
    co.pw = wav_detail::pad_to_multiple(field.width, block);
    co.ph = wav_detail::pad_to_multiple(field.height, block);
    co.pf = wav_detail::pad_to_multiple(field.frames, block);

    // periodic padding
    co.data.resize(static_cast<std::size_t>(co.pw) * co.ph * co.pf);
    for (int f = 0; f < co.pf; ++f)
        for (int r = 0; r < co.ph; ++r)
            for (int c = 0; c < co.pw; ++c)
                co.data[(static_cast<std::size_t>(f) * co.ph + r) * co.pw + c] =
                    field.at(r % field.height, c % field.width, f % field.frames);

    const auto& h = wav_detail::lowpass(spec.family);
    const auto g = wav_detail::highpass(h);
    auto step = [&](const std::complex<double>* in, std::complex<double>* out, int n) {
        wav_detail::dwt_line(in, out, n, h, g);
    };

    int w = co.pw, hh = co.ph, t = co.pf;
    for (int level = 0; level < co.levels; ++level) {
        wav_detail::for_each_line(co.data, co.pw, co.ph, w, hh, t, 0, step);
        wav_detail::for_each_line(co.data, co.pw, co.ph, w, hh, t, 1, step);
        wav_detail::for_each_line(co.data, co.pw, co.ph, w, hh, t, 2, step);
        w /= 2;
        hh /= 2;
        t /= 2;
    }
    return co;
}

inline ComplexField inverse_wavelet3d(const WaveletCoeffs& coeffs) {
    const auto& h = wav_detail::lowpass(coeffs.family);
    const auto g = wav_detail::highpass(h);
    auto step = [&](const std::complex<double>* in, std::complex<double>* out, int n) {
        wav_detail::idwt_line(in, out, n, h, g);
    };

    std::vector<std::complex<double>> vol = coeffs.data;
    for (int level = coeffs.levels - 1; level >= 0; --level) {
        int w = coeffs.pw >> level;
        int hh = coeffs.ph >> level;
        int t = coeffs.pf >> level;
        wav_detail::for_each_line(vol, coeffs.pw, coeffs.ph, w, hh, t, 2, step);
        wav_detail::for_each_line(vol, coeffs.pw, coeffs.ph, w, hh, t, 1, step);
        wav_detail::for_each_line(vol, coeffs.pw, coeffs.ph, w, hh, t, 0, step);
    }

    ComplexField out(coeffs.width, coeffs.height, coeffs.frames);
    for (int f = 0; f < coeffs.frames; ++f)
        for (int r = 0; r < coeffs.height; ++r)
            for (int c = 0; c < coeffs.width; ++c)
                out.at(r, c, f) = vol[(static_cast<std::size_t>(f) * coeffs.ph + r) * coeffs.pw + c];
    return out;
}

}  // namespace turbtrack
