#pragma once

#include <cmath>
#include <complex>

#include "turbtrack/fields.hpp"
#include "turbtrack/wavelet.hpp"

namespace turbtrack {

// Geometric + oscillatory decomposition of the compensated flow by iterated
// complex soft-shrinkage in the 3D wavelet frame. The flow is first encoded
// as a complex scalar field (vx + i vy); shrinkage reduces coefficient
// magnitudes and preserves phase, so the split is equivariant to a global
// rotation of all flow vectors.

struct ShrinkageParams {
    double lambda = 1.0;
    double mu = 1.0;
    int max_iterations = 5;
    double convergence_tol = 1e-4;  // absolute L2 change threshold

    void validate() const {
        if (!(lambda > 0.0) || !(mu > 0.0))
            throw validation_error("ShrinkageParams: lambda and mu must be > 0");
        if (max_iterations < 1)
            throw validation_error("ShrinkageParams: max_iterations must be >= 1");
        if (!(convergence_tol > 0.0))
            throw validation_error("ShrinkageParams: convergence_tol must be > 0");
    }
};

/// Complex soft-threshold: shrink magnitude, keep phase. cshrink(0, t) = 0.
inline std::complex<double> cshrink(std::complex<double> z, double threshold) {
    double mag = std::abs(z);
    if (mag <= threshold) return {0.0, 0.0};
    double s = (mag - threshold) / mag;
    return {z.real() * s, z.imag() * s};
}

struct Decomposition {
    FlowField u;  // geometric component
    FlowField v;  // oscillatory component
    int iterations_used = 0;
    double final_change = 0.0;  // stop metric at exit
};

namespace detail {

inline void shrink_all(WaveletCoeffs& co, double threshold) {
    for (auto& z : co.data) z = cshrink(z, threshold);
}

inline double l2_norm_diff(const ComplexField& a, const ComplexField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += std::norm(a.data[i] - b.data[i]);
    return std::sqrt(s);
}

}  // namespace detail

/// Alternating shrinkage iteration:
///   v[n+1] = V - u[n] - W^-1(CShrink(W(V - u[n]), 2 mu))
///   u[n+1] = W^-1(CShrink(W(V - v[n]), 2 lambda))
/// stopping when max(||u[n+1]-u[n]||, ||v[n+1]-v[n]||) < tol or at the
/// iteration cap. Norms are unnormalized L2 over the complex field.
inline Decomposition decompose(const FlowField& vc, const ShrinkageParams& params,
                               const WaveletSpec& spec) {
    params.validate();
    spec.validate();
    if (!vc.finite()) throw validation_error("decompose: non-finite input flow");

    const ComplexField vtilde = to_complex(vc);
    ComplexField u(vc.width, vc.height, vc.frames);
    ComplexField v(vc.width, vc.height, vc.frames);

    auto shrink_transform = [&](const ComplexField& f, double threshold) {
        WaveletCoeffs co = wavelet3d(f, spec);
        detail::shrink_all(co, threshold);
        return inverse_wavelet3d(co);
    };

    Decomposition result;
    ComplexField residual(vc.width, vc.height, vc.frames);
    int n = 0;
    double change = 0.0;
    while (true) {
        // v update from u[n]
        for (std::size_t i = 0; i < residual.data.size(); ++i)
            residual.data[i] = vtilde.data[i] - u.data[i];
        ComplexField shrunk = shrink_transform(residual, 2.0 * params.mu);
        ComplexField v_next(vc.width, vc.height, vc.frames);
        for (std::size_t i = 0; i < residual.data.size(); ++i)
            v_next.data[i] = residual.data[i] - shrunk.data[i];

        // u update from v[n] (the previous v, per the alternating scheme)
        for (std::size_t i = 0; i < residual.data.size(); ++i)
            residual.data[i] = vtilde.data[i] - v.data[i];
        ComplexField u_next = shrink_transform(residual, 2.0 * params.lambda);

        change = std::max(detail::l2_norm_diff(u_next, u), detail::l2_norm_diff(v_next, v));
        u = std::move(u_next);
        v = std::move(v_next);
        ++n;
        if (change < params.convergence_tol || n >= params.max_iterations) break;
    }

    result.u = to_flow(u);
    result.v = to_flow(v);
    result.iterations_used = n;
    result.final_change = change;
    return result;
}

}  // namespace turbtrack
