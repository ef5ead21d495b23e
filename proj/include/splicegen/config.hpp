#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "splicegen/blending.hpp"
#include "splicegen/harmonization.hpp"
#include "splicegen/matting.hpp"
#include "splicegen/placement.hpp"

namespace splicegen::pipeline {

enum class PipelineVersion { V1, V2 };

std::string to_string(PipelineVersion v);
PipelineVersion pipeline_version_from_string(const std::string& s);

enum class AttackKind { Blur, GaussianNoise, Resize, Jpeg };

std::string to_string(AttackKind k);
AttackKind attack_kind_from_string(const std::string& s);

// A roster entry: applied with `probability`; numeric parameters are drawn
// uniformly from [lo, hi] (lo == hi means fixed).
struct AttackRule {
    AttackKind kind = AttackKind::Blur;
    double probability = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int width = 512;   // resize only
    int height = 512;  // resize only

    void validate() const;
};

struct MethodWeight {
    std::string name;
    double weight = 0.0;
};

struct GenerationConfig {
    std::uint64_t global_seed = 0;
    PipelineVersion version = PipelineVersion::V1;
    matting::MattingParams matting;

    // Rosters for the randomized (v2) path, drawn in name order.
    std::vector<MethodWeight> matting_weights{{"feather", 1.0}, {"guided_filter", 1.0}};
    std::vector<MethodWeight> blend_weights{{"alpha", 1.0}, {"laplacian", 1.0}, {"poisson", 1.0}};
    std::vector<MethodWeight> harmonize_weights{{"stats_transfer", 1.0}};

    double p_refine = 0.9;
    double p_harmonize = 0.9;

    // Fixed-path (v1) harmonization method.
    harmonization::HarmonizeMethod v1_harmonize = harmonization::HarmonizeMethod::StatsTransfer;

    placement::PlacementConstraints placement;
    std::string scorer = "heuristic";  // or "external"
    // Unset: on for v2, off for v1.
    std::optional<bool> enforce_area_ratio;

    std::vector<AttackRule> attacks;
    double gt_threshold = 0.5;
    int laplacian_levels = 4;
    double poisson_tol = 1e-8;
    int poisson_max_iter = 0;
    bool rational_filter = true;

    bool area_ratio_enforced() const {
        return enforce_area_ratio.value_or(version == PipelineVersion::V2);
    }
    void validate() const;
};

GenerationConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const GenerationConfig& c);
GenerationConfig load_config(const std::filesystem::path& path);

}  // namespace splicegen::pipeline
