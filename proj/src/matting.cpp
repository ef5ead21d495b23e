#include "splicegen/matting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splicegen/imaging.hpp"
#include "splicegen/kernels.hpp"

namespace splicegen::matting {

std::size_t Trimap::count(TrimapLabel label) const noexcept {
    return static_cast<std::size_t>(std::count(storage().begin(), storage().end(), label));
}

std::vector<std::uint8_t> Trimap::to_bytes() const {
    std::vector<std::uint8_t> out(storage().size());
    std::transform(storage().begin(), storage().end(), out.begin(),
                   [](TrimapLabel l) { return static_cast<std::uint8_t>(l); });
    return out;
}

Trimap Trimap::from_bytes(int width, int height, const std::vector<std::uint8_t>& bytes) {
    Trimap t(width, height);
    if (bytes.size() != t.pixel_count()) throw InvalidInputError("trimap: size mismatch");
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const std::uint8_t b = bytes[i];
        t.storage()[i] = b < 64    ? TrimapLabel::Background
                         : b > 191 ? TrimapLabel::Foreground
                                   : TrimapLabel::Unknown;
    }
    return t;
}

std::string to_string(MattingMethod m) {
    switch (m) {
        case MattingMethod::GuidedFilter: return "guided_filter";
        case MattingMethod::Feather: return "feather";
        case MattingMethod::External: return "external";
    }
    return "unknown";
}

MattingMethod matting_method_from_string(const std::string& s) {
    if (s == "guided_filter") return MattingMethod::GuidedFilter;
    if (s == "feather") return MattingMethod::Feather;
    if (s == "external") return MattingMethod::External;
    throw InvalidInputError("unknown matting method: " + s);
}

void MattingParams::validate() const {
    if (erode_radius < 0 || dilate_radius < 0 || guided_radius < 0)
        throw InvalidInputError("matting radii must be >= 0");
    if (!(guided_epsilon > 0.0)) throw InvalidInputError("guided_epsilon must be > 0");
}

Trimap generate_trimap(const BinaryMask& mask, const MattingParams& params) {
    params.validate();
    const BinaryMask fg = imaging::erode(mask, {params.erode_radius});
    const BinaryMask grown = imaging::dilate(mask, {params.dilate_radius});
    Trimap t(mask.width(), mask.height());
    const auto f = fg.data();
    const auto g = grown.data();
    auto out = t.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = f[i]   ? TrimapLabel::Foreground
                 : g[i] ? TrimapLabel::Unknown
                        : TrimapLabel::Background;
    }
    return t;
}

bool is_degenerate(const Trimap& trimap) {
    return std::none_of(trimap.storage().begin(), trimap.storage().end(),
                        [](TrimapLabel l) { return l != TrimapLabel::Background; });
}

namespace {

void reimpose_known(const Trimap& trimap, AlphaMatte& alpha) {
    auto a = alpha.data();
    const auto t = trimap.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (t[i] == TrimapLabel::Foreground) a[i] = 1.0;
        else if (t[i] == TrimapLabel::Background) a[i] = 0.0;
        else a[i] = std::clamp(a[i], 0.0, 1.0);
    }
}

std::vector<double> box(const std::vector<double>& src, int w, int h, int r) {
    std::vector<double> out(src.size());
    kernels::box_mean(src, out, w, h, r);
    return out;
}

// Solve (S + eps I) a = c for symmetric 3x3 S given as (xx, xy, xz, yy, yz, zz).
std::array<double, 3> solve_sym3(const std::array<double, 6>& s, double eps,
                                 const std::array<double, 3>& c) {
    const double a = s[0] + eps, b = s[1], d = s[2];
    const double e = s[3] + eps, f = s[4];
    const double g = s[5] + eps;
    const double c00 = e * g - f * f;
    const double c01 = d * f - b * g;
    const double c02 = b * f - d * e;
    const double c11 = a * g - d * d;
    const double c12 = b * d - a * f;
    const double c22 = a * e - b * b;
    const double det = a * c00 + b * c01 + d * c02;
    return {(c00 * c[0] + c01 * c[1] + c02 * c[2]) / det,
            (c01 * c[0] + c11 * c[1] + c12 * c[2]) / det,
            (c02 * c[0] + c12 * c[1] + c22 * c[2]) / det};
}

}  // namespace

AlphaMatte guided_filter_alpha(const ImageBuffer& guide, const Trimap& trimap, int radius,
                               double epsilon) {
    require_same_dims(guide.dims(), trimap.dims(), "guided_filter_alpha");
    if (radius < 0 || !(epsilon > 0.0)) throw InvalidInputError("guided filter: bad parameters");
    const int w = guide.width();
    const int h = guide.height();
    const std::size_t n = guide.pixel_count();
    const int ch = guide.channels();

    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = static_cast<double>(static_cast<std::uint8_t>(trimap.storage()[i])) / 255.0;
    // Exact halves for the unknown band.
    for (std::size_t i = 0; i < n; ++i)
        if (trimap.storage()[i] == TrimapLabel::Unknown) p[i] = 0.5;

    std::vector<std::vector<double>> chan(static_cast<std::size_t>(ch), std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < ch; ++c) chan[c][i] = guide.storage()[i * ch + c];

    const auto mean_p = box(p, w, h, radius);
    std::vector<std::vector<double>> mean_i, mean_ip;
    for (int c = 0; c < ch; ++c) {
        mean_i.push_back(box(chan[c], w, h, radius));
        std::vector<double> prod(n);
        for (std::size_t i = 0; i < n; ++i) prod[i] = chan[c][i] * p[i];
        mean_ip.push_back(box(prod, w, h, radius));
    }

    std::vector<std::vector<double>> coef_a(static_cast<std::size_t>(ch), std::vector<double>(n));
    std::vector<double> coef_b(n);

    if (ch == 1) {
        std::vector<double> sq(n);
        for (std::size_t i = 0; i < n; ++i) sq[i] = chan[0][i] * chan[0][i];
        const auto mean_ii = box(sq, w, h, radius);
        for (std::size_t i = 0; i < n; ++i) {
            const double var = mean_ii[i] - mean_i[0][i] * mean_i[0][i];
            const double cov = mean_ip[0][i] - mean_i[0][i] * mean_p[i];
            coef_a[0][i] = cov / (var + epsilon);
            coef_b[i] = mean_p[i] - coef_a[0][i] * mean_i[0][i];
        }
    } else {
        // Window covariance entries rr, rg, rb, gg, gb, bb.
        constexpr int pairs[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
        std::vector<std::vector<double>> var(6);
        for (int k = 0; k < 6; ++k) {
            std::vector<double> prod(n);
            const auto& u = chan[pairs[k][0]];
            const auto& v = chan[pairs[k][1]];
            for (std::size_t i = 0; i < n; ++i) prod[i] = u[i] * v[i];
            var[k] = box(prod, w, h, radius);
        }
        const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < nn; ++i) {
            std::array<double, 6> s{};
            for (int k = 0; k < 6; ++k)
                s[k] = var[k][i] - mean_i[pairs[k][0]][i] * mean_i[pairs[k][1]][i];
            std::array<double, 3> cov{};
            for (int c = 0; c < 3; ++c) cov[c] = mean_ip[c][i] - mean_i[c][i] * mean_p[i];
            const auto a = solve_sym3(s, epsilon, cov);
            double b = mean_p[i];
            for (int c = 0; c < 3; ++c) {
                coef_a[c][i] = a[c];
                b -= a[c] * mean_i[c][i];
            }
            coef_b[i] = b;
        }
    }

    const auto mean_b = box(coef_b, w, h, radius);
    AlphaMatte alpha(w, h);
    std::vector<double> q = mean_b;
    for (int c = 0; c < ch; ++c) {
        const auto mean_a = box(coef_a[c], w, h, radius);
        for (std::size_t i = 0; i < n; ++i) q[i] += mean_a[i] * chan[c][i];
    }
    std::copy(q.begin(), q.end(), alpha.storage().begin());
    reimpose_known(trimap, alpha);
    return alpha;
}

namespace {

// 1D lower envelope of parabolas (Felzenszwalb & Huttenlocher).
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == inf) continue;
        while (k >= 0) {
            const int p = v[k];
            const double s = ((f[q] + q * static_cast<double>(q)) - (f[p] + p * static_cast<double>(p))) /
                             (2.0 * (q - p));
            if (s <= z[k]) --k;
            else {
                ++k;
                v[k] = q;
                z[k] = s;
                z[k + 1] = inf;
                break;
            }
        }
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -inf;
            z[1] = inf;
        }
    }
    if (k < 0) {
        std::fill(d, d + n, inf);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q) ++j;
        const double dq = q - v[j];
        d[q] = dq * dq + f[v[j]];
    }
}

}  // namespace

std::vector<double> squared_distance_transform(const std::vector<std::uint8_t>& feature, int width,
                                               int height) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = feature[i] ? 0.0 : inf;

    const int m = std::max(width, height);
    std::vector<double> f(m), d(m), z(m + 1);
    std::vector<int> v(m);
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) f[y] = grid[static_cast<std::size_t>(y) * width + x];
        edt_1d(f.data(), d.data(), height, v, z);
        for (int y = 0; y < height; ++y) grid[static_cast<std::size_t>(y) * width + x] = d[y];
    }
    for (int y = 0; y < height; ++y) {
        double* row = grid.data() + static_cast<std::size_t>(y) * width;
        std::copy(row, row + width, f.begin());
        edt_1d(f.data(), d.data(), width, v, z);
        std::copy(d.begin(), d.begin() + width, row);
    }
    return grid;
}

AlphaMatte feather_alpha(const Trimap& trimap) {
    const int w = trimap.width();
    const int h = trimap.height();
    const std::size_t n = trimap.pixel_count();
    std::vector<std::uint8_t> is_bg(n), is_fg(n);
    for (std::size_t i = 0; i < n; ++i) {
        is_bg[i] = trimap.storage()[i] == TrimapLabel::Background;
        is_fg[i] = trimap.storage()[i] == TrimapLabel::Foreground;
    }
    const bool has_bg = std::find(is_bg.begin(), is_bg.end(), 1) != is_bg.end();
    const bool has_fg = std::find(is_fg.begin(), is_fg.end(), 1) != is_fg.end();

    AlphaMatte alpha(w, h);
    if (!has_bg) {
        std::fill(alpha.storage().begin(), alpha.storage().end(), 1.0);
        reimpose_known(trimap, alpha);
        return alpha;
    }
    const auto d_bg = squared_distance_transform(is_bg, w, h);
    if (has_fg) {
        const auto d_fg = squared_distance_transform(is_fg, w, h);
        for (std::size_t i = 0; i < n; ++i) {
            const double b = std::sqrt(d_bg[i]);
            const double f = std::sqrt(d_fg[i]);
            alpha.storage()[i] = b / (b + f);
        }
    } else {
        // Thin object with no eroded core: normalise by the deepest band pixel.
        double peak = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (trimap.storage()[i] == TrimapLabel::Unknown) peak = std::max(peak, d_bg[i]);
        peak = std::sqrt(peak);
        for (std::size_t i = 0; i < n; ++i)
            alpha.storage()[i] = peak > 0.0 ? std::sqrt(d_bg[i]) / peak : 0.0;
    }
    reimpose_known(trimap, alpha);
    return alpha;
}

AlphaMatte refine_alpha(const ImageBuffer& image, const Trimap& trimap, const MattingParams& params) {
    params.validate();
    require_same_dims(image.dims(), trimap.dims(), "refine_alpha");
    if (params.method == MattingMethod::External)
        throw InvalidInputError("refine_alpha: external matting is only reachable through the adapter");
    if (is_degenerate(trimap)) return AlphaMatte(trimap.width(), trimap.height(), 0.0);
    if (trimap.count(TrimapLabel::Unknown) == 0) {
        AlphaMatte alpha(trimap.width(), trimap.height());
        reimpose_known(trimap, alpha);
        return alpha;
    }
    switch (params.method) {
        case MattingMethod::GuidedFilter:
            return guided_filter_alpha(image, trimap, params.guided_radius, params.guided_epsilon);
        case MattingMethod::Feather: return feather_alpha(trimap);
        case MattingMethod::External: break;
    }
    throw InvalidInputError("refine_alpha: unknown method");
}

bool matte_gate(RandomStream& stream, double p_refine) {
    if (!(p_refine >= 0.0 && p_refine <= 1.0)) throw InvalidInputError("p_refine must be in [0,1]");
    return stream.bernoulli(p_refine);
}

}  // namespace splicegen::matting
