#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "turbtrack/fields.hpp"
#include "turbtrack/gaussian.hpp"

namespace turbtrack {

// Rigid camera egomotion under the pinhole model with constant scene depth.
// Depth and focal length only enter through grouped ratios, so those ratios
// are the estimated quantities:
//   Vx = (Tz/Z) x - (Tx f/Z) + (wx/f) x y - (wy/f)(f^2 + x^2) + wz y
//   Vy = (Tz/Z) y - (Ty f/Z) + (wx/f)(f^2 + y^2) - (wy/f) x y - wz x

/// Grouped egomotion parameters for one flow frame.
struct MotionParams {
    double omega_x_over_f = 0.0;  // 1/(frame*pixel)
    double omega_y_over_f = 0.0;
    double omega_z = 0.0;       // 1/frame
    double tx_f_over_z = 0.0;   // pixels/frame
    double ty_f_over_z = 0.0;
    double tz_over_z = 0.0;     // 1/frame

    MotionParams operator+(const MotionParams& o) const {
        return {omega_x_over_f + o.omega_x_over_f, omega_y_over_f + o.omega_y_over_f,
                omega_z + o.omega_z, tx_f_over_z + o.tx_f_over_z,
                ty_f_over_z + o.ty_f_over_z, tz_over_z + o.tz_over_z};
    }
};

/// Gaussian low-pass widths for the motion model; defaults to the
/// one-seventh rule (each axis uses its own extent).
struct SmoothingSpec {
    double sigma_rows = 0.0;  // along rows (vertical), in pixels
    double sigma_cols = 0.0;  // along columns (horizontal), in pixels

    static SmoothingSpec one_seventh(int width, int height) {
        return {height / 7.0, width / 7.0};
    }

    void validate() const {
        if (!(sigma_rows > 0.0) || !(sigma_cols > 0.0))
            throw validation_error("SmoothingSpec: sigmas must be > 0");
    }
};

/// Evaluates the egomotion flow model on the centered grid; one frame.
/// The evaluation is a sum of per-parameter terms, so it is linear in the
/// parameters, exactly, term by term.
inline FlowField eval_motion_model(const MotionParams& p, const PixelGrid& grid) {
    FlowField f(grid.width, grid.height, 1);
    const double ff = grid.focal * grid.focal;
    for (int r = 0; r < grid.height; ++r) {
        double y = grid.y(r);
        for (int c = 0; c < grid.width; ++c) {
            double x = grid.x(c);
            f.x(r, c, 0) = p.tz_over_z * x - p.tx_f_over_z + p.omega_x_over_f * (x * y) -
                           p.omega_y_over_f * (ff + x * x) + p.omega_z * y;
            f.y(r, c, 0) = p.tz_over_z * y - p.ty_f_over_z + p.omega_x_over_f * (ff + y * y) -
                           p.omega_y_over_f * (x * y) - p.omega_z * x;
        }
    }
    return f;
}

/// Multi-frame forward evaluation.
inline FlowField eval_motion_model(const std::vector<MotionParams>& per_frame,
                                   const PixelGrid& grid) {
    FlowField f(grid.width, grid.height, static_cast<int>(per_frame.size()));
    for (std::size_t t = 0; t < per_frame.size(); ++t) {
        FlowField one = eval_motion_model(per_frame[t], grid);
        std::copy(one.vx.begin(), one.vx.end(), f.vx.begin() + f.frame_size() * t);
        std::copy(one.vy.begin(), one.vy.end(), f.vy.begin() + f.frame_size() * t);
    }
    return f;
}

struct MotionEstimate {
    std::vector<MotionParams> params;  // one per frame
    FlowField model;
    FlowField compensated;  // flow - model, exact complement
};

namespace detail {

// Central differences with clamped indices; only interior values feed the
// estimator's averages.
inline void central_dx(const std::vector<double>& a, std::vector<double>& out, int w, int h) {
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            int cl = c > 0 ? c - 1 : 0;
            int cr = c < w - 1 ? c + 1 : w - 1;
            out[static_cast<std::size_t>(r) * w + c] =
                (a[static_cast<std::size_t>(r) * w + cr] - a[static_cast<std::size_t>(r) * w + cl]) / 2.0;
        }
}

inline void central_dy(const std::vector<double>& a, std::vector<double>& out, int w, int h) {
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            int ru = r > 0 ? r - 1 : 0;
            int rd = r < h - 1 ? r + 1 : h - 1;
            out[static_cast<std::size_t>(r) * w + c] =
                (a[static_cast<std::size_t>(rd) * w + c] - a[static_cast<std::size_t>(ru) * w + c]) / 2.0;
        }
}

inline double interior_mean(const std::vector<double>& a, int w, int h, int margin) {
    double sum = 0.0;
    std::size_t n = 0;
    for (int r = margin; r < h - margin; ++r)
        for (int c = margin; c < w - margin; ++c) {
            sum += a[static_cast<std::size_t>(r) * w + c];
            ++n;
        }
    return sum / static_cast<double>(n);
}

}  // namespace detail

/// Interior margin over which the analytic estimator takes spatial averages.
/// The truncated Gaussian and the difference stencils are exact on polynomial
/// fields only where their support stays inside the frame, so the averaged
/// region excludes the smoothing radius plus two stencil rings (clamped so a
/// few center pixels always remain). The margin is symmetric, which keeps
/// <x> = <y> = 0 over the averaged region.
inline int analytic_interior_margin(int width, int height, const SmoothingSpec& s) {
    int radius = std::max(gaussian_radius(s.sigma_cols), gaussian_radius(s.sigma_rows));
    int margin = radius + 2;
    int cap = std::min((width - 3) / 2, (height - 3) / 2);
    return std::max(1, std::min(margin, cap));
}

/// Closed-form per-frame egomotion from smoothed-field derivatives:
/// wz from the mean curl, wx/f and wy/f from the curl's gradient, the T
/// ratios from component means, Tz/Z from the mean divergence. Derivatives
/// are taken on the Gaussian-smoothed components; the component means <Vx>,
/// <Vy> come from the raw flow (smoothing exists only to stabilize the
/// differentiation). All averages run over the same interior region, and the
/// (f^2 + x^2) weights are averaged discretely over that region as well,
/// which makes the estimator an exact inverse of eval_motion_model for
/// constant-depth fields.
inline MotionEstimate estimate_analytic(const FlowField& flow, const PixelGrid& grid,
                                        const SmoothingSpec& smoothing) {
    if (flow.width < 8 || flow.height < 8)
        throw dimension_error("estimate_analytic: flow must be at least 8x8");
    if (!flow.finite()) throw validation_error("estimate_analytic: non-finite flow");
    smoothing.validate();

    const int w = flow.width, h = flow.height;
    const int margin = analytic_interior_margin(w, h, smoothing);
    const double ff = grid.focal * grid.focal;

    // Discrete averages of the rotation weights over the interior region.
    double mean_ff_xx = 0.0, mean_ff_yy = 0.0;
    {
        std::size_t n = 0;
        for (int r = margin; r < h - margin; ++r)
            for (int c = margin; c < w - margin; ++c) {
                mean_ff_xx += ff + grid.x(c) * grid.x(c);
                mean_ff_yy += ff + grid.y(r) * grid.y(r);
                ++n;
            }
        mean_ff_xx /= static_cast<double>(n);
        mean_ff_yy /= static_cast<double>(n);
    }

    MotionEstimate est;
    est.params.resize(flow.frames);

    const std::size_t fs = flow.frame_size();
    std::vector<double> svx(fs), svy(fs), tmp(fs), curl(fs), grad(fs), div(fs);
    for (int t = 0; t < flow.frames; ++t) {
        const double* fx = flow.vx.data() + fs * t;
        const double* fy = flow.vy.data() + fs * t;
        gaussian_smooth_plane(fx, svx.data(), w, h, smoothing.sigma_cols, smoothing.sigma_rows);
        gaussian_smooth_plane(fy, svy.data(), w, h, smoothing.sigma_cols, smoothing.sigma_rows);

        // curl_k = dx(Vy) - dy(Vx); div = dx(Vx) + dy(Vy)
        detail::central_dx(svy, curl, w, h);
        detail::central_dy(svx, tmp, w, h);
        for (std::size_t i = 0; i < fs; ++i) curl[i] -= tmp[i];
        detail::central_dx(svx, div, w, h);
        detail::central_dy(svy, tmp, w, h);
        for (std::size_t i = 0; i < fs; ++i) div[i] += tmp[i];

        MotionParams& p = est.params[t];
        p.omega_z = -0.5 * detail::interior_mean(curl, w, h, margin);
        detail::central_dx(curl, grad, w, h);
        p.omega_x_over_f = -detail::interior_mean(grad, w, h, margin);
        detail::central_dy(curl, grad, w, h);
        p.omega_y_over_f = -detail::interior_mean(grad, w, h, margin);

        double mean_vx = 0.0, mean_vy = 0.0;
        std::size_t n = 0;
        for (int r = margin; r < h - margin; ++r)
            for (int c = margin; c < w - margin; ++c) {
                mean_vx += fx[static_cast<std::size_t>(r) * w + c];
                mean_vy += fy[static_cast<std::size_t>(r) * w + c];
                ++n;
            }
        mean_vx /= static_cast<double>(n);
        mean_vy /= static_cast<double>(n);

        p.tx_f_over_z = -p.omega_y_over_f * mean_ff_xx - mean_vx;
        p.ty_f_over_z = p.omega_x_over_f * mean_ff_yy - mean_vy;
        p.tz_over_z = 0.5 * detail::interior_mean(div, w, h, margin);
    }

    est.model = eval_motion_model(est.params, grid);
    est.compensated = FlowField(w, h, flow.frames);
    for (std::size_t i = 0; i < flow.size(); ++i) {
        est.compensated.vx[i] = flow.vx[i] - est.model.vx[i];
        est.compensated.vy[i] = flow.vy[i] - est.model.vy[i];
    }
    return est;
}

struct EmpiricalEstimate {
    FlowField model;
    FlowField compensated;
};

/// Low-pass camera motion model: per-frame, per-component 2D Gaussian
/// smoothing of the flow (no temporal smoothing); compensated = flow - model.
inline EmpiricalEstimate estimate_empirical(const FlowField& flow, const SmoothingSpec& smoothing) {
    if (!flow.finite()) throw validation_error("estimate_empirical: non-finite flow");
    smoothing.validate();
    EmpiricalEstimate est;
    est.model = FlowField(flow.width, flow.height, flow.frames);
    est.compensated = FlowField(flow.width, flow.height, flow.frames);
    const std::size_t fs = flow.frame_size();
    for (int t = 0; t < flow.frames; ++t) {
        gaussian_smooth_plane(flow.vx.data() + fs * t, est.model.vx.data() + fs * t,
                              flow.width, flow.height, smoothing.sigma_cols, smoothing.sigma_rows);
        gaussian_smooth_plane(flow.vy.data() + fs * t, est.model.vy.data() + fs * t,
                              flow.width, flow.height, smoothing.sigma_cols, smoothing.sigma_rows);
    }
    for (std::size_t i = 0; i < flow.size(); ++i) {
        est.compensated.vx[i] = flow.vx[i] - est.model.vx[i];
        est.compensated.vy[i] = flow.vy[i] - est.model.vy[i];
    }
    return est;
}

}  // namespace turbtrack
