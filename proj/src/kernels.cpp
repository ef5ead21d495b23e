#include "splicegen/kernels.hpp"

#include <omp.h>

#include "kernel_rows.hpp"

namespace splicegen::kernels {

void convolve_rows(std::span<const double> src, std::span<double> dst, int width, int height,
                   int channels, std::span<const double> taps) {
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y)
        detail::convolve_row(src.data() + y * stride, dst.data() + y * stride, width, channels,
                             taps);
}

void convolve_cols(std::span<const double> src, std::span<double> dst, int width, int height,
                   int channels, std::span<const double> taps) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y)
        detail::convolve_col_row(src.data(), dst.data(), width, height, channels, taps, y);
}

void box_mean(std::span<const double> src, std::span<double> dst, int width, int height,
              int radius) {
    std::vector<double> tmp(src.size());
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y)
        detail::box_row(src.data() + static_cast<std::size_t>(y) * width,
                        tmp.data() + static_cast<std::size_t>(y) * width, width, radius);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y)
        detail::box_col_row(tmp.data(), dst.data(), width, height, radius, y);
}

namespace {

void morph(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, int width, int height,
           int radius, bool dilate) {
    std::vector<std::uint8_t> tmp(src.size());
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y)
        detail::morph_row(src.data() + static_cast<std::size_t>(y) * width,
                          tmp.data() + static_cast<std::size_t>(y) * width, width, radius, dilate);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y)
        detail::morph_col_row(tmp.data(), dst.data(), width, height, radius, dilate, y);
}

}  // namespace

void erode_binary(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, int width,
                  int height, int radius) {
    morph(src, dst, width, height, radius, false);
}

void dilate_binary(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, int width,
                   int height, int radius) {
    morph(src, dst, width, height, radius, true);
}

void stencil_apply(const StencilNeighbours& nbrs, std::span<const double> x, std::span<double> y) {
    const long long n = static_cast<long long>(nbrs.size());
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < n; ++k) y[k] = detail::stencil_at(nbrs[k], x, k);
}

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const long long blocks = static_cast<long long>((n + detail::kDotBlock - 1) / detail::kDotBlock);
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
    for (long long blk = 0; blk < blocks; ++blk) {
        const std::size_t lo = static_cast<std::size_t>(blk) * detail::kDotBlock;
        const std::size_t hi = std::min(n, lo + detail::kDotBlock);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += a[i] * b[i];
        partial[blk] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    const long long n = static_cast<long long>(x.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
    const long long n = static_cast<long long>(x.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

}  // namespace splicegen::kernels
