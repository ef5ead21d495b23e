#pragma once

// Raster primitives shared by every stage: colour conversion, binary
// morphology, resampling, Gaussian blur and Gaussian/Laplacian pyramids.
// Everything here is a pure function of its inputs.

#include <vector>

#include "splicegen/image.hpp"

namespace splicegen::imaging {

// sRGB (D65) <-> CIELAB. Lab images hold raw values: L in [0,100], a/b
// roughly [-128,127]; they are not clamped.
ImageBuffer rgb_to_lab(const ImageBuffer& rgb);
ImageBuffer lab_to_rgb(const ImageBuffer& lab);

// Square window of side 2*radius+1. Radius 0 is the identity.
struct StructuringElement {
    int radius = 0;
};

// Pixels outside the image are background.
BinaryMask erode(const BinaryMask& mask, StructuringElement se);
BinaryMask dilate(const BinaryMask& mask, StructuringElement se);

// Bilinear resampling on the pixel-centre grid: source coordinate of output
// pixel i is (i + 0.5) * in/out - 0.5, clamped to the edge. The result is
// clamped to [0,1]. Aspect ratio is whatever the caller asks for.
ImageBuffer resize_bilinear(const ImageBuffer& img, int out_w, int out_h);
// Same sampling grid without the final clamp (used on signed bands).
ImageBuffer resample_bilinear(const ImageBuffer& img, int out_w, int out_h);
AlphaMatte resize_bilinear(const AlphaMatte& alpha, int out_w, int out_h);

// Nearest neighbour on the same pixel-centre grid; preserves binarity.
BinaryMask resize_nearest(const BinaryMask& mask, int out_w, int out_h);

// Normalised sampled Gaussian, radius ceil(3*sigma), clamp-to-edge.
std::vector<double> gaussian_kernel(double sigma);
ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma);

// 5-tap binomial low-pass followed by 2x decimation; output dims are
// ceil(w/2) x ceil(h/2) (a 1x1 image stays 1x1).
ImageBuffer pyramid_down(const ImageBuffer& img);
// Bilinear expansion to target dims, no clamping.
ImageBuffer pyramid_up(const ImageBuffer& img, Dims target);
// Binomial low-pass without decimation.
ImageBuffer smooth_binomial(const ImageBuffer& img);

// Largest level count accepted by the pyramid builders: floor(log2(min dim)).
int max_pyramid_levels(Dims dims);

// levels == 1 returns just {img}.
std::vector<ImageBuffer> gaussian_pyramid(const ImageBuffer& img, int levels);
// levels-1 band-pass images followed by the low-pass residual.
std::vector<ImageBuffer> laplacian_pyramid(const ImageBuffer& img, int levels);
ImageBuffer reconstruct_laplacian(const std::vector<ImageBuffer>& levels);

// Grey value (channel mean) of a 1- or 3-channel image.
ImageBuffer to_gray(const ImageBuffer& img);

}  // namespace splicegen::imaging
