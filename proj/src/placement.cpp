#include "splicegen/placement.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "splicegen/imaging.hpp"

namespace splicegen::placement {

void PlacementConstraints::validate() const {
    if (!(max_area_ratio > 0.0 && max_area_ratio <= 1.0))
        throw InvalidInputError("max_area_ratio must be in (0,1]");
    if (scale_ladder.empty()) throw InvalidInputError("scale ladder must not be empty");
    for (double s : scale_ladder)
        if (!(s > 0.0)) throw InvalidInputError("scale ladder entries must be positive");
    if (n_samples < 1) throw InvalidInputError("n_samples must be >= 1");
}

Dims scaled_object(Dims object, double scale) {
    return {std::max(1, static_cast<int>(std::lround(object.width * scale))),
            std::max(1, static_cast<int>(std::lround(object.height * scale)))};
}

std::vector<double> heuristic_scores(const ImageBuffer& background, int ow, int oh) {
    const int W = background.width();
    const int H = background.height();
    const int gw = W - ow + 1;
    const int gh = H - oh + 1;
    if (gw < 1 || gh < 1) return {};

    const ImageBuffer gray = imaging::to_gray(background);
    // Summed-area table of forward-difference gradient magnitude.
    std::vector<double> sat(static_cast<std::size_t>(W + 1) * (H + 1), 0.0);
    const auto S = [&](int x, int y) -> double& { return sat[static_cast<std::size_t>(y) * (W + 1) + x]; };
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const double v = gray.at(x, y);
            const double gx = x + 1 < W ? std::abs(gray.at(x + 1, y) - v) : 0.0;
            const double gy = y + 1 < H ? std::abs(gray.at(x, y + 1) - v) : 0.0;
            S(x + 1, y + 1) = gx + gy + S(x, y + 1) + S(x + 1, y) - S(x, y);
        }
    }
    const double area = static_cast<double>(ow) * oh;
    std::vector<double> mean_grad(static_cast<std::size_t>(gw) * gh);
    double peak = 0.0;
    for (int y = 0; y < gh; ++y)
        for (int x = 0; x < gw; ++x) {
            const double sum = S(x + ow, y + oh) - S(x, y + oh) - S(x + ow, y) + S(x, y);
            const double m = std::max(0.0, sum / area);
            mean_grad[static_cast<std::size_t>(y) * gw + x] = m;
            peak = std::max(peak, m);
        }

    const auto prior = [](int i, int n) {
        return (1.0 + std::min(i, n - 1 - i)) / (1.0 + (n - 1) / 2);
    };
    std::vector<double> scores(mean_grad.size());
    for (int y = 0; y < gh; ++y)
        for (int x = 0; x < gw; ++x) {
            const std::size_t k = static_cast<std::size_t>(y) * gw + x;
            const double smooth = peak > 1e-12 ? 1.0 - mean_grad[k] / peak : 1.0;
            scores[k] = prior(x, gw) * prior(y, gh) * smooth;
        }
    return scores;
}

RationalityMap score_map(const ImageBuffer& background, Dims object,
                         const PlacementConstraints& constraints, const Scorer& scorer) {
    constraints.validate();
    if (object.width < 1 || object.height < 1) throw InvalidInputError("score_map: empty object");
    RationalityMap map;
    map.background = background.dims();
    bool any = false;
    for (double s : constraints.scale_ladder) {
        ScaleLevel level;
        level.scale = s;
        const Dims od = scaled_object(object, s);
        level.object_w = od.width;
        level.object_h = od.height;
        if (od.width <= background.width() && od.height <= background.height()) {
            level.grid_w = background.width() - od.width + 1;
            level.grid_h = background.height() - od.height + 1;
            level.scores = scorer(background, od.width, od.height);
            if (level.scores.size() != static_cast<std::size_t>(level.grid_w) * level.grid_h)
                throw InvalidInputError("score_map: scorer returned wrong grid size");
            for (double v : level.scores)
                if (!std::isfinite(v)) throw InvalidInputError("score_map: non-finite score");
            any = true;
        }
        map.levels.push_back(std::move(level));
    }
    if (!any) throw InfeasiblePlacementError("object larger than background at every scale");
    return map;
}

namespace {

struct Cell {
    int s;
    int y;
    int x;
    double score;
};

// True when a is preferred over b.
bool better(const Cell& a, const Cell& b) {
    if (a.score != b.score) return a.score > b.score;
    return std::tie(a.s, a.y, a.x) < std::tie(b.s, b.y, b.x);
}

}  // namespace

SearchOutcome randomized_search(const RationalityMap& map, const PlacementConstraints& constraints,
                                RandomStream& stream) {
    constraints.validate();
    if (map.levels.empty()) throw InfeasiblePlacementError("empty rationality map");
    const double bg_area = static_cast<double>(map.background.area());
    const int n_levels = static_cast<int>(map.levels.size());

    bool have = false;
    Cell best{};
    int valid = 0;
    for (int i = 0; i < constraints.n_samples; ++i) {
        const int s = stream.uniform_int(0, n_levels - 1);
        const ScaleLevel& lvl = map.levels[s];
        if (!lvl.feasible()) continue;
        const int x = stream.uniform_int(0, lvl.grid_w - 1);
        const int y = stream.uniform_int(0, lvl.grid_h - 1);
        const double ratio = static_cast<double>(lvl.object_w) * lvl.object_h / bg_area;
        if (constraints.enforce_area_ratio && ratio > constraints.max_area_ratio) continue;
        ++valid;
        const Cell c{s, y, x, lvl.at(x, y)};
        if (!have || better(c, best)) {
            best = c;
            have = true;
        }
    }
    if (!have) throw InfeasiblePlacementError("no sampled placement satisfies the constraints");

    // Local ascent on the winning scale.
    const ScaleLevel& lvl = map.levels[best.s];
    for (;;) {
        Cell next = best;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int x = best.x + dx;
                const int y = best.y + dy;
                if ((dx == 0 && dy == 0) || x < 0 || y < 0 || x >= lvl.grid_w || y >= lvl.grid_h)
                    continue;
                const Cell c{best.s, y, x, lvl.at(x, y)};
                if (c.score > best.score && better(c, next)) next = c;
            }
        if (next.x == best.x && next.y == best.y) break;
        best = next;
    }

    SearchOutcome out;
    out.spec = {best.x, best.y, lvl.object_w, lvl.object_h};
    out.scale_index = best.s;
    out.score = best.score;
    out.valid_samples = valid;
    return out;
}

double area_ratio(const BinaryMask& gt) {
    return static_cast<double>(gt.count()) / static_cast<double>(gt.pixel_count());
}

}  // namespace splicegen::placement
