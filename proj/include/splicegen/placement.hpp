#pragma once

// Where and how large the pasted object lands: a score field over candidate
// (position, scale) cells and a seeded randomized search over it.

#include <functional>
#include <vector>

#include "splicegen/image.hpp"
#include "splicegen/random.hpp"

namespace splicegen::placement {

struct PlacementSpec {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    bool operator==(const PlacementSpec&) const = default;
    bool inside(Dims background) const {
        return width >= 1 && height >= 1 && x >= 0 && y >= 0 && x + width <= background.width &&
               y + height <= background.height;
    }
};

struct PlacementConstraints {
    double max_area_ratio = 0.5;
    std::vector<double> scale_ladder{0.25, 0.5, 0.75, 1.0};
    int n_samples = 256;
    bool enforce_area_ratio = true;

    void validate() const;
};

// Scores for one rung of the scale ladder; scores has grid_w * grid_h
// entries (row-major over top-left positions) or is empty when the object
// does not fit at this scale.
struct ScaleLevel {
    double scale = 1.0;
    int object_w = 0;
    int object_h = 0;
    int grid_w = 0;
    int grid_h = 0;
    std::vector<double> scores;

    bool feasible() const { return !scores.empty(); }
    double at(int x, int y) const { return scores[static_cast<std::size_t>(y) * grid_w + x]; }
};

struct RationalityMap {
    Dims background;
    std::vector<ScaleLevel> levels;
};

// Returns (W - ow + 1) * (H - oh + 1) scores for an ow x oh object.
using Scorer = std::function<std::vector<double>(const ImageBuffer& background, int object_w,
                                                 int object_h)>;

// Border-distance prior times local background smoothness, each in [0,1].
std::vector<double> heuristic_scores(const ImageBuffer& background, int object_w, int object_h);

// Object size at scale s: max(1, round(dim * s)).
Dims scaled_object(Dims object, double scale);

// Throws InfeasiblePlacementError when the object fits at no scale.
RationalityMap score_map(const ImageBuffer& background, Dims object,
                         const PlacementConstraints& constraints,
                         const Scorer& scorer = heuristic_scores);

struct SearchOutcome {
    PlacementSpec spec;
    int scale_index = 0;
    double score = 0.0;
    int valid_samples = 0;
};

// Draws n_samples (scale, y, x) cells, drops those above max_area_ratio
// (when enforced), keeps the best with ties broken by the smallest
// (scale, y, x), then climbs to strictly better 8-neighbours on that scale.
SearchOutcome randomized_search(const RationalityMap& map, const PlacementConstraints& constraints,
                                RandomStream& stream);

// Fraction of set pixels.
double area_ratio(const BinaryMask& gt);

}  // namespace splicegen::placement
