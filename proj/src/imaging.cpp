#include "splicegen/imaging.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "splicegen/kernels.hpp"

namespace splicegen::imaging {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Linear sRGB -> XYZ, D65. The reference white is the row sums so that
// (1,1,1) maps to a = b = 0 exactly.
constexpr Mat3 kRgbToXyz{{{0.4124564, 0.3575761, 0.1804375},
                          {0.2126729, 0.7151522, 0.0721750},
                          {0.0193339, 0.1191920, 0.9503041}}};

Mat3 invert(const Mat3& m) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    Mat3 inv{};
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

const Mat3& xyz_to_rgb() {
    static const Mat3 inv = invert(kRgbToXyz);
    return inv;
}

std::array<double, 3> white_point() {
    std::array<double, 3> w{};
    for (int r = 0; r < 3; ++r) w[r] = kRgbToXyz[r][0] + kRgbToXyz[r][1] + kRgbToXyz[r][2];
    return w;
}

double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) {
    return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

constexpr double kDelta = 6.0 / 29.0;

double lab_f(double t) {
    return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_inv(double u) {
    return u > kDelta ? u * u * u : 3.0 * kDelta * kDelta * (u - 4.0 / 29.0);
}

void require_rgb(const ImageBuffer& img, const char* what) {
    if (img.channels() != 3) throw InvalidInputError(std::string(what) + ": expected 3 channels");
}

constexpr std::array<double, 5> kBinomial{1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

ImageBuffer separable(const ImageBuffer& img, std::span<const double> taps) {
    ImageBuffer tmp(img.width(), img.height(), img.channels());
    ImageBuffer out(img.width(), img.height(), img.channels());
    kernels::convolve_rows(img.data(), tmp.data(), img.width(), img.height(), img.channels(), taps);
    kernels::convolve_cols(tmp.data(), out.data(), img.width(), img.height(), img.channels(), taps);
    return out;
}

void check_target(int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0) throw InvalidInputError("resize: target dimensions must be > 0");
}

// Source sample grid for one axis: lower index and weight of the upper one.
struct Tap {
    int lo;
    int hi;
    double w;
};

std::vector<Tap> bilinear_taps(int in, int out) {
    std::vector<Tap> taps(static_cast<std::size_t>(out));
    const double scale = static_cast<double>(in) / out;
    for (int i = 0; i < out; ++i) {
        double s = (i + 0.5) * scale - 0.5;
        s = std::clamp(s, 0.0, static_cast<double>(in - 1));
        const int lo = static_cast<int>(std::floor(s));
        const int hi = std::min(lo + 1, in - 1);
        taps[i] = {lo, hi, s - lo};
    }
    return taps;
}

template <typename Raster>
void bilinear_into(const Raster& src, Raster& dst) {
    const int ch = src.channels();
    const auto tx = bilinear_taps(src.width(), dst.width());
    const auto ty = bilinear_taps(src.height(), dst.height());
#pragma omp parallel for schedule(static)
    for (int y = 0; y < dst.height(); ++y) {
        const Tap& v = ty[y];
        for (int x = 0; x < dst.width(); ++x) {
            const Tap& u = tx[x];
            for (int c = 0; c < ch; ++c) {
                const double top = (1.0 - u.w) * src.at(u.lo, v.lo, c) + u.w * src.at(u.hi, v.lo, c);
                const double bot = (1.0 - u.w) * src.at(u.lo, v.hi, c) + u.w * src.at(u.hi, v.hi, c);
                dst.at(x, y, c) = (1.0 - v.w) * top + v.w * bot;
            }
        }
    }
}

}  // namespace

ImageBuffer rgb_to_lab(const ImageBuffer& rgb) {
    require_rgb(rgb, "rgb_to_lab");
    const auto white = white_point();
    ImageBuffer lab(rgb.width(), rgb.height(), 3);
    const long long n = static_cast<long long>(rgb.pixel_count());
    const double* src = rgb.data().data();
    double* dst = lab.data().data();
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const double r = srgb_to_linear(src[3 * i]);
        const double g = srgb_to_linear(src[3 * i + 1]);
        const double b = srgb_to_linear(src[3 * i + 2]);
        std::array<double, 3> f{};
        for (int k = 0; k < 3; ++k) {
            const double xyz = kRgbToXyz[k][0] * r + kRgbToXyz[k][1] * g + kRgbToXyz[k][2] * b;
            f[k] = lab_f(xyz / white[k]);
        }
        dst[3 * i] = 116.0 * f[1] - 16.0;
        dst[3 * i + 1] = 500.0 * (f[0] - f[1]);
        dst[3 * i + 2] = 200.0 * (f[1] - f[2]);
    }
    return lab;
}

ImageBuffer lab_to_rgb(const ImageBuffer& lab) {
    require_rgb(lab, "lab_to_rgb");
    const auto white = white_point();
    const Mat3& inv = xyz_to_rgb();
    ImageBuffer rgb(lab.width(), lab.height(), 3);
    const long long n = static_cast<long long>(lab.pixel_count());
    const double* src = lab.data().data();
    double* dst = rgb.data().data();
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const double fy = (src[3 * i] + 16.0) / 116.0;
        const double fx = fy + src[3 * i + 1] / 500.0;
        const double fz = fy - src[3 * i + 2] / 200.0;
        const std::array<double, 3> xyz{white[0] * lab_f_inv(fx), white[1] * lab_f_inv(fy),
                                        white[2] * lab_f_inv(fz)};
        for (int k = 0; k < 3; ++k) {
            const double lin = inv[k][0] * xyz[0] + inv[k][1] * xyz[1] + inv[k][2] * xyz[2];
            dst[3 * i + k] = linear_to_srgb(lin);
        }
    }
    return rgb;
}

BinaryMask erode(const BinaryMask& mask, StructuringElement se) {
    if (se.radius < 0) throw InvalidInputError("erode: negative radius");
    if (se.radius == 0) return mask;
    BinaryMask out(mask.width(), mask.height());
    kernels::erode_binary(mask.data(), out.data(), mask.width(), mask.height(), se.radius);
    return out;
}

BinaryMask dilate(const BinaryMask& mask, StructuringElement se) {
    if (se.radius < 0) throw InvalidInputError("dilate: negative radius");
    if (se.radius == 0) return mask;
    BinaryMask out(mask.width(), mask.height());
    kernels::dilate_binary(mask.data(), out.data(), mask.width(), mask.height(), se.radius);
    return out;
}

ImageBuffer resample_bilinear(const ImageBuffer& img, int out_w, int out_h) {
    check_target(out_w, out_h);
    if (img.width() == out_w && img.height() == out_h) return img;
    ImageBuffer out(out_w, out_h, img.channels());
    bilinear_into(img, out);
    return out;
}

ImageBuffer resize_bilinear(const ImageBuffer& img, int out_w, int out_h) {
    ImageBuffer out = resample_bilinear(img, out_w, out_h);
    out.clamp();
    return out;
}

AlphaMatte resize_bilinear(const AlphaMatte& alpha, int out_w, int out_h) {
    check_target(out_w, out_h);
    if (alpha.width() == out_w && alpha.height() == out_h) return alpha;
    AlphaMatte out(out_w, out_h);
    bilinear_into(alpha, out);
    for (double& v : out.storage()) v = std::clamp(v, 0.0, 1.0);
    return out;
}

BinaryMask resize_nearest(const BinaryMask& mask, int out_w, int out_h) {
    check_target(out_w, out_h);
    if (mask.width() == out_w && mask.height() == out_h) return mask;
    BinaryMask out(out_w, out_h);
    const double sx = static_cast<double>(mask.width()) / out_w;
    const double sy = static_cast<double>(mask.height()) / out_h;
    for (int y = 0; y < out_h; ++y) {
        const int yy = std::min(static_cast<int>(std::floor((y + 0.5) * sy)), mask.height() - 1);
        for (int x = 0; x < out_w; ++x) {
            const int xx = std::min(static_cast<int>(std::floor((x + 0.5) * sx)), mask.width() - 1);
            out.at(x, y) = mask.at(xx, yy);
        }
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) throw InvalidInputError("gaussian_blur: sigma must be > 0");
    const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += k[i + r];
    }
    for (double& v : k) v /= sum;
    return k;
}

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
    const auto k = gaussian_kernel(sigma);
    return separable(img, k);
}

ImageBuffer smooth_binomial(const ImageBuffer& img) { return separable(img, kBinomial); }

ImageBuffer pyramid_down(const ImageBuffer& img) {
    const ImageBuffer low = smooth_binomial(img);
    const int w = (img.width() + 1) / 2;
    const int h = (img.height() + 1) / 2;
    ImageBuffer out(w, h, img.channels());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = low.at(2 * x, 2 * y, c);
    return out;
}

ImageBuffer pyramid_up(const ImageBuffer& img, Dims target) {
    return resample_bilinear(img, target.width, target.height);
}

int max_pyramid_levels(Dims dims) {
    const auto m = static_cast<unsigned>(std::min(dims.width, dims.height));
    return m == 0 ? 0 : static_cast<int>(std::bit_width(m)) - 1;
}

namespace {

void check_levels(const ImageBuffer& img, int levels) {
    if (levels < 1) throw InvalidInputError("pyramid: levels must be >= 1");
    if (levels > 1 && levels > max_pyramid_levels(img.dims()))
        throw InvalidInputError("pyramid: too many levels for image size");
}

}  // namespace

std::vector<ImageBuffer> gaussian_pyramid(const ImageBuffer& img, int levels) {
    check_levels(img, levels);
    std::vector<ImageBuffer> pyr;
    pyr.reserve(static_cast<std::size_t>(levels));
    pyr.push_back(img);
    for (int l = 1; l < levels; ++l) pyr.push_back(pyramid_down(pyr.back()));
    return pyr;
}

std::vector<ImageBuffer> laplacian_pyramid(const ImageBuffer& img, int levels) {
    auto gauss = gaussian_pyramid(img, levels);
    std::vector<ImageBuffer> lap;
    lap.reserve(gauss.size());
    for (std::size_t l = 0; l + 1 < gauss.size(); ++l) {
        ImageBuffer band = gauss[l];
        const ImageBuffer up = pyramid_up(gauss[l + 1], band.dims());
        auto b = band.data();
        auto u = up.data();
        for (std::size_t i = 0; i < b.size(); ++i) b[i] -= u[i];
        lap.push_back(std::move(band));
    }
    lap.push_back(std::move(gauss.back()));
    return lap;
}

ImageBuffer reconstruct_laplacian(const std::vector<ImageBuffer>& levels) {
    if (levels.empty()) throw InvalidInputError("reconstruct_laplacian: no levels");
    ImageBuffer acc = levels.back();
    for (std::size_t l = levels.size() - 1; l-- > 0;) {
        ImageBuffer up = pyramid_up(acc, levels[l].dims());
        auto u = up.data();
        auto b = levels[l].data();
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += b[i];
        acc = std::move(up);
    }
    return acc;
}

ImageBuffer to_gray(const ImageBuffer& img) {
    if (img.channels() == 1) return img;
    ImageBuffer out(img.width(), img.height(), 1);
    const std::size_t n = img.pixel_count();
    const double* src = img.data().data();
    for (std::size_t i = 0; i < n; ++i)
        out.storage()[i] = (src[3 * i] + src[3 * i + 1] + src[3 * i + 2]) / 3.0;
    return out;
}

}  // namespace splicegen::imaging
