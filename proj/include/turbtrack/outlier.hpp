#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "turbtrack/fields.hpp"

namespace turbtrack {

// Leave-one-out screening of flow frames. Each frame is reduced to a scalar
// magnitude statistic; a frame is an outlier when removing it moves the
// leave-one-out mean by more than kappa deviations. The deviation is, by
// default, the literal printed formula (square root of the mean absolute
// deviation, no inner square); the conventional sample standard deviation is
// available as a switch.

enum class DeviationRule { paper, std_dev };
enum class FrameStatistic { max_magnitude, mean_magnitude };

struct OutlierParams {
    double kappa = 5.0;
    FrameStatistic statistic = FrameStatistic::max_magnitude;
    DeviationRule deviation = DeviationRule::paper;

    void validate() const {
        if (!(kappa > 0.0)) throw validation_error("OutlierParams: kappa must be > 0");
    }
};

/// Per-frame scalar reduction of the flow magnitude.
inline std::vector<double> frame_statistics(const FlowField& flow, FrameStatistic stat) {
    std::vector<double> s(flow.frames, 0.0);
    const std::size_t fs = flow.frame_size();
    for (int t = 0; t < flow.frames; ++t) {
        const double* fx = flow.vx.data() + fs * t;
        const double* fy = flow.vy.data() + fs * t;
        if (stat == FrameStatistic::max_magnitude) {
            double m = 0.0;
            for (std::size_t i = 0; i < fs; ++i) m = std::max(m, std::hypot(fx[i], fy[i]));
            s[t] = m;
        } else {
            double acc = 0.0;
            for (std::size_t i = 0; i < fs; ++i) acc += std::hypot(fx[i], fy[i]);
            s[t] = acc / static_cast<double>(fs);
        }
    }
    return s;
}

/// Returns the sorted indices of frames flagged by the leave-one-out test.
inline std::vector<int> detect_outlier_frames(const FlowField& flow, const OutlierParams& params) {
    params.validate();
    const int n = flow.frames;
    if (n < 3) throw dimension_error("detect_outlier_frames: need at least 3 frames");

    std::vector<double> s = frame_statistics(flow, params.statistic);
    double total = 0.0;
    for (double v : s) total += v;

    // M_i = mean of the statistic with frame i left out
    std::vector<double> loo(n);
    for (int i = 0; i < n; ++i) loo[i] = (total - s[i]) / static_cast<double>(n - 1);

    double mean_loo = 0.0;
    for (double v : loo) mean_loo += v;
    mean_loo /= static_cast<double>(n);

    double dev;
    if (params.deviation == DeviationRule::paper) {
        double acc = 0.0;
        for (double v : loo) acc += std::abs(mean_loo - v);
        dev = std::sqrt(acc / static_cast<double>(n - 1));
    } else {
        double acc = 0.0;
        for (double v : loo) acc += (mean_loo - v) * (mean_loo - v);
        dev = std::sqrt(acc / static_cast<double>(n - 1));
    }

    std::vector<int> flagged;
    for (int i = 0; i < n; ++i)
        if (std::abs(loo[i] - mean_loo) > params.kappa * dev) flagged.push_back(i);
    return flagged;
}

/// Replaces flagged frames by linear temporal interpolation between the
/// nearest clean frames; a flagged prefix/suffix copies the nearest clean
/// frame. Clean frames pass through bit-exact.
inline FlowField repair_frames(const FlowField& flow, const std::vector<int>& bad) {
    std::vector<char> is_bad(flow.frames, 0);
    for (int i : bad) {
        if (i < 0 || i >= flow.frames)
            throw validation_error("repair_frames: frame index out of range");
        is_bad[i] = 1;
    }
    int clean_count = 0;
    for (int t = 0; t < flow.frames; ++t)
        if (!is_bad[t]) ++clean_count;
    if (clean_count == 0) throw validation_error("repair_frames: every frame is flagged");

    FlowField out = flow;
    const std::size_t fs = flow.frame_size();

    auto copy_frame = [&](int dst, int src) {
        std::copy(flow.vx.begin() + fs * src, flow.vx.begin() + fs * (src + 1),
                  out.vx.begin() + fs * dst);
        std::copy(flow.vy.begin() + fs * src, flow.vy.begin() + fs * (src + 1),
                  out.vy.begin() + fs * dst);
    };

    for (int t = 0; t < flow.frames; ++t) {
        if (!is_bad[t]) continue;
        int prev = t - 1;
        while (prev >= 0 && is_bad[prev]) --prev;
        int next = t + 1;
        while (next < flow.frames && is_bad[next]) ++next;

        if (prev < 0) {
            copy_frame(t, next);
        } else if (next >= flow.frames) {
            copy_frame(t, prev);
        } else {
            double w = static_cast<double>(t - prev) / static_cast<double>(next - prev);
            for (std::size_t i = 0; i < fs; ++i) {
                out.vx[fs * t + i] =
                    flow.vx[fs * prev + i] + w * (flow.vx[fs * next + i] - flow.vx[fs * prev + i]);
                out.vy[fs * t + i] =
                    flow.vy[fs * prev + i] + w * (flow.vy[fs * next + i] - flow.vy[fs * prev + i]);
            }
        }
    }
    return out;
}

}  // namespace turbtrack
