#pragma once

// Alpha, Laplacian-pyramid and gradient-domain (Poisson) compositing.

#include <optional>
#include <string>
#include <vector>

#include "splicegen/image.hpp"
#include "splicegen/kernels.hpp"

namespace splicegen::blending {

enum class BlendMode { Alpha, Laplacian, Poisson };

std::string to_string(BlendMode m);
BlendMode blend_mode_from_string(const std::string& s);

struct BlendRequest {
    ImageBuffer foreground;
    ImageBuffer background;
    AlphaMatte alpha;
    BlendMode mode = BlendMode::Alpha;
    int laplacian_levels = 4;
    double poisson_tol = 1e-8;
    // 0 means 10 * unknown count.
    int poisson_max_iter = 0;
};

struct SolverStats {
    int unknowns = 0;
    std::vector<int> iterations;         // per channel
    std::vector<double> residuals;       // relative, per channel
};

struct BlendResult {
    ImageBuffer image;
    BlendMode mode_used = BlendMode::Alpha;
    // Set when a Poisson request had an empty interior and used alpha blending.
    bool poisson_fallback = false;
    std::optional<SolverStats> solver;
};

// C = alpha * F + (1 - alpha) * B, per pixel and channel.
ImageBuffer alpha_blend(const BlendRequest& req);
ImageBuffer laplacian_blend(const BlendRequest& req);
BlendResult poisson_blend(const BlendRequest& req);

// Dispatch on req.mode.
BlendResult blend(const BlendRequest& req);

// Unknowns of the Poisson problem: pixels with alpha > 0.5 that do not touch
// the image frame, in row-major order, together with their 5-point stencil
// neighbour table.
struct PoissonSystem {
    int width = 0;
    int height = 0;
    std::vector<int> pixels;              // y * width + x of each unknown
    kernels::StencilNeighbours neighbours;
    std::vector<double> rhs;              // one channel at a time

    std::size_t size() const { return pixels.size(); }
};

PoissonSystem build_poisson_region(const AlphaMatte& alpha);

// Fills system.rhs for one channel: boundary background values plus the
// negated discrete Laplacian of the foreground (A = 4I - adjacency).
void assemble_rhs(PoissonSystem& system, const ImageBuffer& foreground,
                  const ImageBuffer& background, int channel);

struct CgResult {
    std::vector<double> solution;
    int iterations = 0;
    double relative_residual = 0.0;
};

// Conjugate gradient on the SPD stencil operator. Converged when
// ||r|| <= tol * ||rhs||; throws NonConvergenceError otherwise.
CgResult solve_cg(const PoissonSystem& system, double tol, int max_iter);

}  // namespace splicegen::blending
