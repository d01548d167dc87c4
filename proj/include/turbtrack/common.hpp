#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace turbtrack {

// Error hierarchy. Every throwing operation uses one of these so callers can
// distinguish failure causes; messages name the offending file/stage.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct io_error : error {
    using error::error;
};
// No input files matched the requested pattern.
struct no_match_error : error {
    using error::error;
};
// Inputs disagree on dimensions (or dimensions are out of contract).
struct dimension_error : error {
    using error::error;
};
// A file exists but cannot be decoded.
struct decode_error : error {
    using error::error;
};
// A flow file does not start with the expected magic bytes.
struct bad_magic_error : error {
    using error::error;
};
// A flow file ends before its declared payload.
struct truncated_error : error {
    using error::error;
};
// Bad parameters or configuration.
struct validation_error : error {
    using error::error;
};
// Numerically degenerate state (e.g. singular innovation covariance).
struct numeric_error : error {
    using error::error;
};

/// Runs fn(i) for i in [0, n). Splits the range over at most `threads`
/// workers; results must not depend on execution order.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (n == 0) return;
    std::size_t workers = threads <= 0 ? 1 : static_cast<std::size_t>(threads);
    if (workers > n) workers = n;
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = lo + chunk < n ? lo + chunk : n;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline int default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace turbtrack
