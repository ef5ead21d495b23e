#pragma once

// Per-record composition: the fixed path (trimap, refinement, alpha blend,
// ground truth, harmonization) and the randomized path that adds placement
// search, gated stages, blend-mode selection and post-processing attacks.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "splicegen/adapter.hpp"
#include "splicegen/config.hpp"
#include "splicegen/image.hpp"
#include "splicegen/manifest.hpp"

namespace splicegen::pipeline {

// A concrete attack with its drawn parameter.
struct AttackSpec {
    AttackKind kind = AttackKind::Blur;
    double value = 0.0;  // sigma, std or quality
    int width = 0;       // resize
    int height = 0;      // resize

    nlohmann::ordered_json to_json() const;
};

// Applies one attack. Resize transforms the mask with nearest neighbour;
// every other attack leaves it alone. Noise draws from `noise`.
void apply_attack(const AttackSpec& attack, ImageBuffer& image, BinaryMask& gt, RandomStream& noise);

// Rules are applied in the fixed order blur, noise, resize, jpeg whatever
// their order in the config.
std::vector<AttackSpec> draw_attacks(const std::vector<AttackRule>& rules, RandomStream& stream);

// gt(p) = 1 iff alpha(p) > threshold.
BinaryMask emit_ground_truth(const AlphaMatte& alpha, double threshold);

struct CompositeRecord {
    std::string record_id;
    Split split = Split::Train;
    std::string category;
    ImageBuffer composite;
    BinaryMask ground_truth;
    double area_ratio = 0.0;
    nlohmann::ordered_json provenance;
};

struct Adapters {
    std::optional<adapter::AdapterCommand> matting;
    std::optional<adapter::AdapterCommand> harmonization;
    std::optional<adapter::AdapterCommand> rationality;

    static Adapters from_env();
};

struct ComposeContext {
    Adapters adapters;
    // Scratch space for adapter jobs; each record uses its own subdirectory.
    std::filesystem::path scratch_dir;
};

// Record-level failures throw splicegen::Error subclasses.
CompositeRecord compose_v1(const ManifestEntry& entry, const GenerationConfig& config,
                           const ComposeContext& ctx = {});
CompositeRecord compose_v2(const ManifestEntry& entry, const GenerationConfig& config,
                           const ComposeContext& ctx = {});
CompositeRecord compose(const ManifestEntry& entry, const GenerationConfig& config,
                        const ComposeContext& ctx = {});

// Region of the background touched by matting for a paste rectangle.
struct Roi {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;  // exclusive
    int y1 = 0;  // exclusive
};
Roi matting_roi(const placement::PlacementSpec& spec, Dims background,
                const matting::MattingParams& params);

}  // namespace splicegen::pipeline
