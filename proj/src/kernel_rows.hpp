#pragma once

// Per-row bodies shared by the parallel and reference kernel drivers, so the
// two only differ in how rows are scheduled.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace splicegen::kernels::detail {

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

inline void convolve_row(const double* src, double* dst, int width, int channels,
                         std::span<const double> taps) {
    const int r = static_cast<int>(taps.size()) / 2;
    for (int x = 0; x < width; ++x) {
        for (int c = 0; c < channels; ++c) {
            double acc = 0.0;
            for (int k = -r; k <= r; ++k) {
                const int xx = clamp_index(x + k, width);
                acc += taps[k + r] * src[static_cast<std::size_t>(xx) * channels + c];
            }
            dst[static_cast<std::size_t>(x) * channels + c] = acc;
        }
    }
}

// Output row y of a vertical convolution.
inline void convolve_col_row(const double* src, double* dst, int width, int height, int channels,
                             std::span<const double> taps, int y) {
    const int r = static_cast<int>(taps.size()) / 2;
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    double* out = dst + static_cast<std::size_t>(y) * stride;
    std::fill(out, out + stride, 0.0);
    for (int k = -r; k <= r; ++k) {
        const int yy = clamp_index(y + k, height);
        const double* in = src + static_cast<std::size_t>(yy) * stride;
        const double w = taps[k + r];
        for (std::size_t i = 0; i < stride; ++i) out[i] += w * in[i];
    }
}

inline void box_row(const double* src, double* dst, int width, int radius) {
    for (int x = 0; x < width; ++x) {
        const int lo = std::max(0, x - radius);
        const int hi = std::min(width - 1, x + radius);
        double acc = 0.0;
        for (int xx = lo; xx <= hi; ++xx) acc += src[xx];
        dst[x] = acc / static_cast<double>(hi - lo + 1);
    }
}

inline void box_col_row(const double* src, double* dst, int width, int height, int radius, int y) {
    const int lo = std::max(0, y - radius);
    const int hi = std::min(height - 1, y + radius);
    double* out = dst + static_cast<std::size_t>(y) * width;
    std::fill(out, out + width, 0.0);
    for (int yy = lo; yy <= hi; ++yy) {
        const double* in = src + static_cast<std::size_t>(yy) * width;
        for (int x = 0; x < width; ++x) out[x] += in[x];
    }
    const double n = static_cast<double>(hi - lo + 1);
    for (int x = 0; x < width; ++x) out[x] /= n;
}

// Window of side 2r+1 centred on x; outside samples are 0.
inline void morph_row(const std::uint8_t* src, std::uint8_t* dst, int width, int radius,
                      bool dilate) {
    for (int x = 0; x < width; ++x) {
        const int lo = x - radius;
        const int hi = x + radius;
        if (dilate) {
            std::uint8_t v = 0;
            for (int xx = std::max(0, lo); xx <= std::min(width - 1, hi) && !v; ++xx) v = src[xx];
            dst[x] = v != 0;
        } else {
            std::uint8_t v = lo >= 0 && hi < width;
            for (int xx = std::max(0, lo); xx <= std::min(width - 1, hi) && v; ++xx) v = src[xx];
            dst[x] = v != 0;
        }
    }
}

inline void morph_col_row(const std::uint8_t* src, std::uint8_t* dst, int width, int height,
                          int radius, bool dilate, int y) {
    const int lo = y - radius;
    const int hi = y + radius;
    std::uint8_t* out = dst + static_cast<std::size_t>(y) * width;
    if (dilate) {
        std::fill(out, out + width, std::uint8_t{0});
        for (int yy = std::max(0, lo); yy <= std::min(height - 1, hi); ++yy) {
            const std::uint8_t* in = src + static_cast<std::size_t>(yy) * width;
            for (int x = 0; x < width; ++x) out[x] |= in[x];
        }
    } else {
        const std::uint8_t inside = lo >= 0 && hi < height;
        std::fill(out, out + width, inside);
        if (!inside) return;
        for (int yy = lo; yy <= hi; ++yy) {
            const std::uint8_t* in = src + static_cast<std::size_t>(yy) * width;
            for (int x = 0; x < width; ++x) out[x] &= in[x];
        }
    }
}

inline double stencil_at(const std::array<int, 4>& nb, std::span<const double> x, std::size_t k) {
    double v = 4.0 * x[k];
    for (int j : nb)
        if (j >= 0) v -= x[static_cast<std::size_t>(j)];
    return v;
}

constexpr std::size_t kDotBlock = 2048;

}  // namespace splicegen::kernels::detail
