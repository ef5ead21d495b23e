#pragma once

// Fixtures and independent reference implementations used by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "splicegen/image.hpp"
#include "splicegen/image_io.hpp"

namespace testsupport {

using splicegen::AlphaMatte;
using splicegen::BinaryMask;
using splicegen::ImageBuffer;

inline ImageBuffer random_image(int w, int h, int c, std::uint32_t seed, double lo = 0.0,
                                double hi = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    ImageBuffer img(w, h, c);
    for (double& v : img.storage()) v = d(rng);
    return img;
}

inline ImageBuffer constant_image(int w, int h, int c, double v) { return ImageBuffer(w, h, c, v); }

inline BinaryMask rect_mask(int w, int h, int x0, int y0, int rw, int rh) {
    BinaryMask m(w, h);
    for (int y = y0; y < y0 + rh; ++y)
        for (int x = x0; x < x0 + rw; ++x) m.set(x, y);
    return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Window minimum / maximum with outside pixels read as 0.
inline BinaryMask brute_erode(const BinaryMask& m, int r) {
    BinaryMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            bool all = true;
            for (int dy = -r; dy <= r && all; ++dy)
                for (int dx = -r; dx <= r && all; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    const bool inside = xx >= 0 && yy >= 0 && xx < m.width() && yy < m.height();
                    if (!inside || !m.test(xx, yy)) all = false;
                }
            out.set(x, y, all);
        }
    return out;
}

inline BinaryMask brute_dilate(const BinaryMask& m, int r) {
    BinaryMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            bool any = false;
            for (int dy = -r; dy <= r && !any; ++dy)
                for (int dx = -r; dx <= r && !any; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (xx >= 0 && yy >= 0 && xx < m.width() && yy < m.height() && m.test(xx, yy))
                        any = true;
                }
            out.set(x, y, any);
        }
    return out;
}

// Gaussian elimination with partial pivoting on a dense copy.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

// Self-removing scratch directory.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "t") {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("splicegen-test-" + std::to_string(::getpid()) + "-" + tag + "-" +
                 std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Smooth colourful image: sums of low-frequency sinusoids, well inside gamut.
inline ImageBuffer natural_image(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    ImageBuffer img(w, h, 3);
    double fx[3], fy[3], ph[3];
    for (int c = 0; c < 3; ++c) {
        fx[c] = 1.0 + 3.0 * d(rng);
        fy[c] = 1.0 + 3.0 * d(rng);
        ph[c] = 6.28 * d(rng);
    }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                img.at(x, y, c) = 0.5 + 0.3 * std::sin(fx[c] * 6.28 * x / w + ph[c]) *
                                            std::cos(fy[c] * 6.28 * y / h);
    return img;
}

// Peak signal-to-noise ratio in dB for [0,1] images.
inline double psnr(const ImageBuffer& a, const ImageBuffer& b) {
    double se = 0.0;
    for (std::size_t i = 0; i < a.storage().size(); ++i) {
        const double d = a.storage()[i] - b.storage()[i];
        se += d * d;
    }
    const double mse = se / static_cast<double>(a.storage().size());
    return mse == 0.0 ? INFINITY : 10.0 * std::log10(1.0 / mse);
}

// Byte-for-byte comparison of two directory trees.
inline bool trees_identical(const std::filesystem::path& a, const std::filesystem::path& b,
                            std::string* why = nullptr) {
    namespace fs = std::filesystem;
    auto list = [](const fs::path& root) {
        std::vector<std::string> out;
        for (const auto& e : fs::recursive_directory_iterator(root))
            out.push_back(fs::relative(e.path(), root).generic_string() +
                          (e.is_directory() ? "/" : ""));
        std::sort(out.begin(), out.end());
        return out;
    };
    const auto la = list(a), lb = list(b);
    if (la != lb) {
        if (why) *why = "file lists differ";
        return false;
    }
    for (const auto& rel : la) {
        if (rel.back() == '/') continue;
        if (read_file(a / rel) != read_file(b / rel)) {
            if (why) *why = rel + " differs";
            return false;
        }
    }
    return true;
}

}  // namespace testsupport
