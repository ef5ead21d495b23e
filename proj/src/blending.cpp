#include "splicegen/blending.hpp"

#include <algorithm>
#include <cmath>

#include "splicegen/imaging.hpp"

namespace splicegen::blending {

std::string to_string(BlendMode m) {
    switch (m) {
        case BlendMode::Alpha: return "alpha";
        case BlendMode::Laplacian: return "laplacian";
        case BlendMode::Poisson: return "poisson";
    }
    return "unknown";
}

BlendMode blend_mode_from_string(const std::string& s) {
    if (s == "alpha") return BlendMode::Alpha;
    if (s == "laplacian") return BlendMode::Laplacian;
    if (s == "poisson") return BlendMode::Poisson;
    throw InvalidInputError("unknown blend mode: " + s);
}

namespace {

void check_request(const BlendRequest& req) {
    const Dims d = req.background.dims();
    require_same_dims(req.foreground.dims(), d, "blend");
    require_same_dims(req.alpha.dims(), d, "blend");
    if (req.foreground.channels() != req.background.channels())
        throw InvalidInputError("blend: channel count mismatch");
}

ImageBuffer blend_with(const ImageBuffer& fg, const ImageBuffer& bg, std::span<const double> a) {
    const int ch = fg.channels();
    ImageBuffer out(fg.width(), fg.height(), ch);
    const double* f = fg.data().data();
    const double* b = bg.data().data();
    double* o = out.data().data();
    const long long n = static_cast<long long>(fg.pixel_count());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const double w = a[i];
        for (int c = 0; c < ch; ++c) {
            const std::size_t k = static_cast<std::size_t>(i) * ch + c;
            o[k] = w * f[k] + (1.0 - w) * b[k];
        }
    }
    return out;
}

}  // namespace

ImageBuffer alpha_blend(const BlendRequest& req) {
    check_request(req);
    return blend_with(req.foreground, req.background, req.alpha.data());
}

ImageBuffer laplacian_blend(const BlendRequest& req) {
    check_request(req);
    const int levels = req.laplacian_levels;
    if (levels < 1 || (levels > 1 && levels > imaging::max_pyramid_levels(req.background.dims())))
        throw InvalidInputError("laplacian_blend: level count too deep for image");

    const auto lf = imaging::laplacian_pyramid(req.foreground, levels);
    const auto lb = imaging::laplacian_pyramid(req.background, levels);
    // Mask pyramid: binomial-smoothed alpha, then the usual Gaussian pyramid.
    const ImageBuffer a0 = imaging::smooth_binomial(
        ImageBuffer(req.alpha.width(), req.alpha.height(), 1, req.alpha.storage()));
    const auto ga = imaging::gaussian_pyramid(a0, levels);

    std::vector<ImageBuffer> bands;
    bands.reserve(lf.size());
    for (std::size_t l = 0; l < lf.size(); ++l) bands.push_back(blend_with(lf[l], lb[l], ga[l].data()));
    ImageBuffer out = imaging::reconstruct_laplacian(bands);
    out.clamp();
    return out;
}

PoissonSystem build_poisson_region(const AlphaMatte& alpha) {
    PoissonSystem sys;
    sys.width = alpha.width();
    sys.height = alpha.height();
    std::vector<int> index(alpha.pixel_count(), -1);
    for (int y = 1; y + 1 < sys.height; ++y)
        for (int x = 1; x + 1 < sys.width; ++x)
            if (alpha.at(x, y) > 0.5) {
                const int p = y * sys.width + x;
                index[p] = static_cast<int>(sys.pixels.size());
                sys.pixels.push_back(p);
            }
    sys.neighbours.resize(sys.pixels.size());
    for (std::size_t k = 0; k < sys.pixels.size(); ++k) {
        const int p = sys.pixels[k];
        sys.neighbours[k] = {index[p - 1], index[p + 1], index[p - sys.width],
                             index[p + sys.width]};
    }
    return sys;
}

void assemble_rhs(PoissonSystem& sys, const ImageBuffer& fg, const ImageBuffer& bg, int channel) {
    const int ch = fg.channels();
    const auto f = fg.data();
    const auto b = bg.data();
    sys.rhs.assign(sys.size(), 0.0);
    for (std::size_t k = 0; k < sys.size(); ++k) {
        const int p = sys.pixels[k];
        const int nb[4] = {p - 1, p + 1, p - sys.width, p + sys.width};
        const auto at = [&](std::span<const double> img, int q) {
            return img[static_cast<std::size_t>(q) * ch + channel];
        };
        double v = 4.0 * at(f, p);
        for (int j = 0; j < 4; ++j) {
            v -= at(f, nb[j]);
            if (sys.neighbours[k][j] < 0) v += at(b, nb[j]);
        }
        sys.rhs[k] = v;
    }
}

CgResult solve_cg(const PoissonSystem& sys, double tol, int max_iter) {
    const std::size_t n = sys.size();
    CgResult res;
    res.solution.assign(n, 0.0);
    if (n == 0) return res;
    if (sys.rhs.size() != n) throw InvalidInputError("solve_cg: rhs not assembled");

    std::vector<double> r = sys.rhs;
    std::vector<double> p = r;
    std::vector<double> ap(n);
    const double rhs_norm = std::sqrt(kernels::dot(sys.rhs, sys.rhs));
    // x = 0 is exact for a zero right-hand side.
    if (rhs_norm == 0.0) return res;
    // ||r|| <= tol * ||b|| also meets tol * (1 + ||b||).
    const double target = tol * rhs_norm;
    double rr = kernels::dot(r, r);
    const auto relative = [&](double rr_now) { return std::sqrt(rr_now) / rhs_norm; };

    int it = 0;
    while (std::sqrt(rr) > target) {
        if (it >= max_iter)
            throw NonConvergenceError("conjugate gradient did not converge", relative(rr), it);
        kernels::stencil_apply(sys.neighbours, p, ap);
        const double alpha = rr / kernels::dot(p, ap);
        kernels::axpy(alpha, p, res.solution);
        kernels::axpy(-alpha, ap, r);
        const double rr_next = kernels::dot(r, r);
        kernels::xpby(r, rr_next / rr, p);
        rr = rr_next;
        ++it;
    }
    res.iterations = it;
    res.relative_residual = relative(rr);
    return res;
}

BlendResult poisson_blend(const BlendRequest& req) {
    check_request(req);
    BlendResult out;
    PoissonSystem sys = build_poisson_region(req.alpha);
    if (sys.size() == 0) {
        out.image = alpha_blend(req);
        out.mode_used = BlendMode::Alpha;
        out.poisson_fallback = true;
        return out;
    }
    const int max_iter =
        req.poisson_max_iter > 0 ? req.poisson_max_iter : static_cast<int>(10 * sys.size());
    out.image = req.background;
    out.mode_used = BlendMode::Poisson;
    SolverStats stats;
    stats.unknowns = static_cast<int>(sys.size());
    const int ch = req.background.channels();
    for (int c = 0; c < ch; ++c) {
        assemble_rhs(sys, req.foreground, req.background, c);
        const CgResult cg = solve_cg(sys, req.poisson_tol, max_iter);
        for (std::size_t k = 0; k < sys.size(); ++k)
            out.image.storage()[static_cast<std::size_t>(sys.pixels[k]) * ch + c] = cg.solution[k];
        stats.iterations.push_back(cg.iterations);
        stats.residuals.push_back(cg.relative_residual);
    }
    out.image.clamp();
    out.solver = std::move(stats);
    return out;
}

BlendResult blend(const BlendRequest& req) {
    switch (req.mode) {
        case BlendMode::Alpha: return {alpha_blend(req), BlendMode::Alpha, false, std::nullopt};
        case BlendMode::Laplacian:
            return {laplacian_blend(req), BlendMode::Laplacian, false, std::nullopt};
        case BlendMode::Poisson: return poisson_blend(req);
    }
    throw InvalidInputError("blend: unknown mode");
}

}  // namespace splicegen::blending
