#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "turbtrack/fields.hpp"
#include "turbtrack/outlier.hpp"

namespace turbtrack {

// Magnitude thresholding of a flow field with trailing-window statistics,
// morphological cleanup, and connected-region extraction.

struct DetectionParams {
    int history = 5;          // trailing frames entering the threshold stats
    double multiplier = 5.0;  // deviations above the mean
    int open_radius = 1;      // square structuring elements
    int close_radius = 1;
    int min_area = 4;
    DeviationRule deviation = DeviationRule::paper;

    void validate() const {
        if (history < 1) throw validation_error("DetectionParams: history must be >= 1");
        if (!(multiplier > 0.0)) throw validation_error("DetectionParams: multiplier must be > 0");
        if (open_radius < 0 || close_radius < 0)
            throw validation_error("DetectionParams: radii must be >= 0");
        if (min_area < 1) throw validation_error("DetectionParams: min_area must be >= 1");
    }
};

struct BBox {
    int top = 0, left = 0, height = 0, width = 0;

    bool contains(double row, double col) const {
        return row >= top && row < top + height && col >= left && col < left + width;
    }
    double center_row() const { return top + (height - 1) / 2.0; }
    double center_col() const { return left + (width - 1) / 2.0; }
};

struct Region {
    double centroid_row = 0.0;
    double centroid_col = 0.0;
    BBox bbox;
    int area = 0;
};

using Mask = std::vector<std::uint8_t>;  // row-major, one frame

struct DetectionSet {
    int width = 0, height = 0, frames = 0;
    std::vector<Mask> masks;                  // per frame
    std::vector<std::vector<Region>> regions; // per frame
    std::vector<double> thresholds;           // per frame
};

struct FrameStats {
    double mean = 0.0;
    double deviation = 0.0;
};

/// Spatial mean and deviation of the magnitude of one flow frame. The
/// deviation follows the printed formula by default (sqrt of mean absolute
/// deviation with an n-1 denominator).
inline FrameStats magnitude_stats(const FlowField& flow, int frame, DeviationRule rule) {
    const std::size_t fs = flow.frame_size();
    const double* fx = flow.vx.data() + fs * frame;
    const double* fy = flow.vy.data() + fs * frame;
    FrameStats st;
    for (std::size_t i = 0; i < fs; ++i) st.mean += std::hypot(fx[i], fy[i]);
    st.mean /= static_cast<double>(fs);
    double acc = 0.0;
    for (std::size_t i = 0; i < fs; ++i) {
        double d = std::hypot(fx[i], fy[i]) - st.mean;
        acc += rule == DeviationRule::paper ? std::abs(d) : d * d;
    }
    double denom = fs > 1 ? static_cast<double>(fs - 1) : 1.0;
    st.deviation = std::sqrt(acc / denom);
    return st;
}

struct ThresholdResult {
    std::vector<double> thresholds;  // T_i per frame
    std::vector<Mask> masks;         // strict mask = magnitude > T_i
};

/// T_i = mean_i + multiplier * dev_i, where mean_i and dev_i average the
/// per-frame statistics over the trailing `history` frames (including i,
/// fewer at the start of the sequence).
inline ThresholdResult adaptive_threshold(const FlowField& flow, const DetectionParams& params) {
    params.validate();
    if (!flow.finite()) throw validation_error("adaptive_threshold: non-finite flow");

    std::vector<FrameStats> per_frame(flow.frames);
    for (int t = 0; t < flow.frames; ++t)
        per_frame[t] = magnitude_stats(flow, t, params.deviation);

    ThresholdResult out;
    out.thresholds.resize(flow.frames);
    out.masks.resize(flow.frames);
    const std::size_t fs = flow.frame_size();
    for (int t = 0; t < flow.frames; ++t) {
        int lo = std::max(0, t - params.history + 1);
        double m = 0.0, d = 0.0;
        for (int k = lo; k <= t; ++k) {
            m += per_frame[k].mean;
            d += per_frame[k].deviation;
        }
        int n = t - lo + 1;
        m /= n;
        d /= n;
        double threshold = m + params.multiplier * d;
        out.thresholds[t] = threshold;

        Mask& mask = out.masks[t];
        mask.assign(fs, 0);
        const double* fx = flow.vx.data() + fs * t;
        const double* fy = flow.vy.data() + fs * t;
        for (std::size_t i = 0; i < fs; ++i)
            mask[i] = std::hypot(fx[i], fy[i]) > threshold ? 1 : 0;
    }
    return out;
}

namespace detail {

// Erosion treats pixels outside the frame as set, dilation as clear, so
// objects touching the border are stable under opening/closing.
inline Mask erode(const Mask& m, int width, int height, int radius) {
    if (radius == 0) return m;
    Mask out(m.size(), 0);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            bool keep = m[static_cast<std::size_t>(r) * width + c] != 0;
            for (int dr = -radius; keep && dr <= radius; ++dr)
                for (int dc = -radius; keep && dc <= radius; ++dc) {
                    int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= height || cc < 0 || cc >= width) continue;
                    if (!m[static_cast<std::size_t>(rr) * width + cc]) keep = false;
                }
            out[static_cast<std::size_t>(r) * width + c] = keep ? 1 : 0;
        }
    return out;
}

inline Mask dilate(const Mask& m, int width, int height, int radius) {
    if (radius == 0) return m;
    Mask out(m.size(), 0);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            bool hit = false;
            for (int dr = -radius; !hit && dr <= radius; ++dr)
                for (int dc = -radius; !hit && dc <= radius; ++dc) {
                    int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= height || cc < 0 || cc >= width) continue;
                    if (m[static_cast<std::size_t>(rr) * width + cc]) hit = true;
                }
            out[static_cast<std::size_t>(r) * width + c] = hit ? 1 : 0;
        }
    return out;
}

}  // namespace detail

/// Binary opening then closing with square structuring elements.
inline Mask morph_cleanup(const Mask& mask, int width, int height, int open_radius,
                          int close_radius) {
    Mask m = detail::dilate(detail::erode(mask, width, height, open_radius), width, height,
                            open_radius);
    m = detail::erode(detail::dilate(m, width, height, close_radius), width, height, close_radius);
    return m;
}

/// 8-connected components of the mask; components smaller than min_area are
/// dropped. Centroids are mean pixel coordinates, boxes are tight.
inline std::vector<Region> extract_regions(const Mask& mask, int width, int height, int min_area) {
    std::vector<Region> regions;
    std::vector<std::int32_t> label(mask.size(), -1);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < mask.size(); ++start) {
        if (!mask[start] || label[start] >= 0) continue;
        std::int32_t id = static_cast<std::int32_t>(regions.size());
        stack.assign(1, start);
        label[start] = id;

        std::int64_t sum_r = 0, sum_c = 0;
        int min_r = height, max_r = -1, min_c = width, max_c = -1;
        int area = 0;
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            int r = static_cast<int>(i / width);
            int c = static_cast<int>(i % width);
            ++area;
            sum_r += r;
            sum_c += c;
            min_r = std::min(min_r, r);
            max_r = std::max(max_r, r);
            min_c = std::min(min_c, c);
            max_c = std::max(max_c, c);
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= height || cc < 0 || cc >= width) continue;
                    std::size_t j = static_cast<std::size_t>(rr) * width + cc;
                    if (mask[j] && label[j] < 0) {
                        label[j] = id;
                        stack.push_back(j);
                    }
                }
        }
        Region reg;
        reg.area = area;
        reg.centroid_row = static_cast<double>(sum_r) / area;
        reg.centroid_col = static_cast<double>(sum_c) / area;
        reg.bbox = {min_r, min_c, max_r - min_r + 1, max_c - min_c + 1};
        regions.push_back(reg);
    }
    std::vector<Region> kept;
    for (const Region& r : regions)
        if (r.area >= min_area) kept.push_back(r);
    return kept;
}

/// Full detection pass: adaptive threshold, morphology, region extraction.
inline DetectionSet detect(const FlowField& flow, const DetectionParams& params) {
    ThresholdResult thr = adaptive_threshold(flow, params);
    DetectionSet set;
    set.width = flow.width;
    set.height = flow.height;
    set.frames = flow.frames;
    set.thresholds = std::move(thr.thresholds);
    set.masks.resize(flow.frames);
    set.regions.resize(flow.frames);
    for (int t = 0; t < flow.frames; ++t) {
        set.masks[t] = morph_cleanup(thr.masks[t], flow.width, flow.height, params.open_radius,
                                     params.close_radius);
        set.regions[t] = extract_regions(set.masks[t], flow.width, flow.height, params.min_area);
    }
    return set;
}

}  // namespace turbtrack
