#pragma once

// Data-parallel inner loops shared by the imaging, matting and blending
// stages. Each kernel has an OpenMP version (namespace kernels) and a plain
// serial version (namespace kernels::reference) kept for testing and
// benchmarking. Per-element kernels produce bit-identical results in both
// versions. dot() uses a fixed block decomposition so its result does not
// depend on the thread count.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace splicegen::kernels {

// Neighbour table for a 5-point stencil over a list of unknowns: entry k
// holds the unknown indices of the left/right/up/down neighbours, or -1 when
// the neighbour is a fixed boundary value.
using StencilNeighbours = std::vector<std::array<int, 4>>;

// Horizontal / vertical 1D convolution, clamp-to-edge, odd tap count.
void convolve_rows(std::span<const double> src, std::span<double> dst, int width, int height,
                   int channels, std::span<const double> taps);
void convolve_cols(std::span<const double> src, std::span<double> dst, int width, int height,
                   int channels, std::span<const double> taps);

// Mean over the (2r+1)^2 window truncated to the image, single channel.
void box_mean(std::span<const double> src, std::span<double> dst, int width, int height,
              int radius);

// Binary square-window erosion / dilation; outside pixels count as 0.
void erode_binary(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, int width,
                  int height, int radius);
void dilate_binary(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, int width,
                   int height, int radius);

// y = 4x - sum(neighbours of x)
void stencil_apply(const StencilNeighbours& nbrs, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);
// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
// y = x + b * y
void xpby(std::span<const double> x, double b, std::span<double> y);

namespace reference {

void convolve_rows(std::span<const double> src, std::span<double> dst, int width, int height,
                   int channels, std::span<const double> taps);
void convolve_cols(std::span<const double> src, std::span<double> dst, int width, int height,
                   int channels, std::span<const double> taps);
void box_mean(std::span<const double> src, std::span<double> dst, int width, int height,
              int radius);
void erode_binary(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, int width,
                  int height, int radius);
void dilate_binary(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, int width,
                   int height, int radius);
void stencil_apply(const StencilNeighbours& nbrs, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double a, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double b, std::span<double> y);

}  // namespace reference

}  // namespace splicegen::kernels
