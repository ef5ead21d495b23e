#include "kernel_rows.hpp"
#include "splicegen/kernels.hpp"

namespace splicegen::kernels::reference {

void convolve_rows(std::span<const double> src, std::span<double> dst, int width, int height,
                   int channels, std::span<const double> taps) {
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y)
        detail::convolve_row(src.data() + y * stride, dst.data() + y * stride, width, channels,
                             taps);
}

void convolve_cols(std::span<const double> src, std::span<double> dst, int width, int height,
                   int channels, std::span<const double> taps) {
    for (int y = 0; y < height; ++y)
        detail::convolve_col_row(src.data(), dst.data(), width, height, channels, taps, y);
}

void box_mean(std::span<const double> src, std::span<double> dst, int width, int height,
              int radius) {
    std::vector<double> tmp(src.size());
    for (int y = 0; y < height; ++y)
        detail::box_row(src.data() + static_cast<std::size_t>(y) * width,
                        tmp.data() + static_cast<std::size_t>(y) * width, width, radius);
    for (int y = 0; y < height; ++y)
        detail::box_col_row(tmp.data(), dst.data(), width, height, radius, y);
}

void erode_binary(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, int width,
                  int height, int radius) {
    std::vector<std::uint8_t> tmp(src.size());
    for (int y = 0; y < height; ++y)
        detail::morph_row(src.data() + static_cast<std::size_t>(y) * width,
                          tmp.data() + static_cast<std::size_t>(y) * width, width, radius, false);
    for (int y = 0; y < height; ++y)
        detail::morph_col_row(tmp.data(), dst.data(), width, height, radius, false, y);
}

void dilate_binary(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, int width,
                   int height, int radius) {
    std::vector<std::uint8_t> tmp(src.size());
    for (int y = 0; y < height; ++y)
        detail::morph_row(src.data() + static_cast<std::size_t>(y) * width,
                          tmp.data() + static_cast<std::size_t>(y) * width, width, radius, true);
    for (int y = 0; y < height; ++y)
        detail::morph_col_row(tmp.data(), dst.data(), width, height, radius, true, y);
}

void stencil_apply(const StencilNeighbours& nbrs, std::span<const double> x, std::span<double> y) {
    for (std::size_t k = 0; k < nbrs.size(); ++k) y[k] = detail::stencil_at(nbrs[k], x, k);
}

// Same block split as the parallel version, summed in block order.
double dot(std::span<const double> a, std::span<const double> b) {
    double total = 0.0;
    for (std::size_t lo = 0; lo < a.size(); lo += detail::kDotBlock) {
        const std::size_t hi = std::min(a.size(), lo + detail::kDotBlock);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += a[i] * b[i];
        total += acc;
    }
    return total;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + b * y[i];
}

}  // namespace splicegen::kernels::reference
