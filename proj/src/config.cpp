#include "splicegen/config.hpp"

#include <fstream>
#include <set>

namespace splicegen::pipeline {

using nlohmann::json;

std::string to_string(PipelineVersion v) { return v == PipelineVersion::V1 ? "v1" : "v2"; }

PipelineVersion pipeline_version_from_string(const std::string& s) {
    if (s == "v1") return PipelineVersion::V1;
    if (s == "v2") return PipelineVersion::V2;
    throw InvalidInputError("unknown pipeline version: " + s);
}

std::string to_string(AttackKind k) {
    switch (k) {
        case AttackKind::Blur: return "blur";
        case AttackKind::GaussianNoise: return "gaussian_noise";
        case AttackKind::Resize: return "resize";
        case AttackKind::Jpeg: return "jpeg";
    }
    return "unknown";
}

AttackKind attack_kind_from_string(const std::string& s) {
    if (s == "blur") return AttackKind::Blur;
    if (s == "gaussian_noise") return AttackKind::GaussianNoise;
    if (s == "resize") return AttackKind::Resize;
    if (s == "jpeg") return AttackKind::Jpeg;
    throw InvalidInputError("unknown attack kind: " + s);
}

void AttackRule::validate() const {
    if (!(probability >= 0.0 && probability <= 1.0))
        throw InvalidInputError("attack probability must be in [0,1]");
    if (lo > hi) throw InvalidInputError("attack parameter range is inverted");
    switch (kind) {
        case AttackKind::Jpeg:
            if (lo < 1 || hi > 100) throw InvalidInputError("jpeg quality must be in [1,100]");
            break;
        case AttackKind::GaussianNoise:
            if (lo < 0) throw InvalidInputError("noise std must be >= 0");
            break;
        case AttackKind::Blur:
            if (!(lo > 0)) throw InvalidInputError("blur sigma must be > 0");
            break;
        case AttackKind::Resize:
            if (width < 1 || height < 1) throw InvalidInputError("resize target must be positive");
            break;
    }
}

namespace {

void check_weights(const std::vector<MethodWeight>& w, const char* what) {
    double total = 0.0;
    for (const auto& m : w) {
        if (m.weight < 0.0) throw InvalidInputError(std::string(what) + ": negative weight");
        total += m.weight;
    }
    if (!(total > 0.0)) throw InvalidInputError(std::string(what) + ": weights all zero");
}

std::vector<MethodWeight> weights_from_json(const json& j) {
    std::vector<MethodWeight> out;
    for (auto it = j.begin(); it != j.end(); ++it) out.push_back({it.key(), it.value().get<double>()});
    return out;
}

nlohmann::ordered_json weights_to_json(const std::vector<MethodWeight>& w) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& m : w) j[m.name] = m.weight;
    return j;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw InvalidInputError(std::string("unknown config key in ") + where + ": " + it.key());
}

const char* param_name(AttackKind k) {
    switch (k) {
        case AttackKind::Blur: return "sigma";
        case AttackKind::GaussianNoise: return "std";
        case AttackKind::Jpeg: return "quality";
        case AttackKind::Resize: return "";
    }
    return "";
}

}  // namespace

void GenerationConfig::validate() const {
    matting.validate();
    placement.validate();
    if (!(p_refine >= 0.0 && p_refine <= 1.0)) throw InvalidInputError("p_refine must be in [0,1]");
    if (!(p_harmonize >= 0.0 && p_harmonize <= 1.0))
        throw InvalidInputError("p_harmonize must be in [0,1]");
    if (!(gt_threshold > 0.0 && gt_threshold < 1.0))
        throw InvalidInputError("gt_threshold must be in (0,1)");
    if (laplacian_levels < 1) throw InvalidInputError("laplacian_levels must be >= 1");
    if (!(poisson_tol > 0.0)) throw InvalidInputError("poisson_tol must be > 0");
    if (poisson_max_iter < 0) throw InvalidInputError("poisson_max_iter must be >= 0");
    if (scorer != "heuristic" && scorer != "external")
        throw InvalidInputError("scorer must be 'heuristic' or 'external'");
    check_weights(matting_weights, "matting_weights");
    check_weights(blend_weights, "blend_weights");
    check_weights(harmonize_weights, "harmonize_weights");
    for (const auto& m : matting_weights) matting::matting_method_from_string(m.name);
    for (const auto& m : blend_weights) blending::blend_mode_from_string(m.name);
    for (const auto& m : harmonize_weights) harmonization::harmonize_method_from_string(m.name);
    for (const auto& a : attacks) a.validate();
}

GenerationConfig config_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInputError("config must be a JSON object");
    reject_unknown(j,
                   {"global_seed", "version", "matting", "matting_weights", "blend_weights",
                    "harmonize_weights", "p_refine", "p_harmonize", "v1_harmonize", "placement",
                    "enforce_area_ratio", "attacks", "gt_threshold", "laplacian_levels",
                    "poisson_tol", "poisson_max_iter", "rational_filter"},
                   "config");
    GenerationConfig c;
    try {
        c.global_seed = j.value("global_seed", c.global_seed);
        c.version = pipeline_version_from_string(j.value("version", std::string("v1")));
        if (j.contains("matting")) {
            const json& m = j["matting"];
            reject_unknown(m, {"erode_radius", "dilate_radius", "method", "guided_radius", "guided_epsilon"},
                           "matting");
            c.matting.erode_radius = m.value("erode_radius", c.matting.erode_radius);
            c.matting.dilate_radius = m.value("dilate_radius", c.matting.dilate_radius);
            c.matting.method = matting::matting_method_from_string(m.value("method", std::string("guided_filter")));
            c.matting.guided_radius = m.value("guided_radius", c.matting.guided_radius);
            c.matting.guided_epsilon = m.value("guided_epsilon", c.matting.guided_epsilon);
        }
        if (j.contains("matting_weights")) c.matting_weights = weights_from_json(j["matting_weights"]);
        if (j.contains("blend_weights")) c.blend_weights = weights_from_json(j["blend_weights"]);
        if (j.contains("harmonize_weights")) c.harmonize_weights = weights_from_json(j["harmonize_weights"]);
        c.p_refine = j.value("p_refine", c.p_refine);
        c.p_harmonize = j.value("p_harmonize", c.p_harmonize);
        if (j.contains("v1_harmonize"))
            c.v1_harmonize = harmonization::harmonize_method_from_string(j["v1_harmonize"].get<std::string>());
        if (j.contains("placement")) {
            const json& p = j["placement"];
            reject_unknown(p, {"max_area_ratio", "scale_ladder", "n_samples", "scorer"}, "placement");
            c.placement.max_area_ratio = p.value("max_area_ratio", c.placement.max_area_ratio);
            if (p.contains("scale_ladder")) c.placement.scale_ladder = p["scale_ladder"].get<std::vector<double>>();
            c.placement.n_samples = p.value("n_samples", c.placement.n_samples);
            c.scorer = p.value("scorer", c.scorer);
        }
        if (j.contains("enforce_area_ratio") && !j["enforce_area_ratio"].is_null())
            c.enforce_area_ratio = j["enforce_area_ratio"].get<bool>();
        if (j.contains("attacks")) {
            for (const json& a : j["attacks"]) {
                AttackRule r;
                r.kind = attack_kind_from_string(a.at("kind").get<std::string>());
                if (r.kind == AttackKind::Resize)
                    reject_unknown(a, {"kind", "probability", "width", "height"}, "attack");
                else
                    reject_unknown(a, {"kind", "probability", param_name(r.kind)}, "attack");
                r.probability = a.value("probability", 1.0);
                if (r.kind == AttackKind::Resize) {
                    r.width = a.value("width", r.width);
                    r.height = a.value("height", r.height);
                } else {
                    const json& v = a.at(param_name(r.kind));
                    if (v.is_array()) {
                        r.lo = v.at(0).get<double>();
                        r.hi = v.at(1).get<double>();
                    } else {
                        r.lo = r.hi = v.get<double>();
                    }
                }
                c.attacks.push_back(r);
            }
        }
        c.gt_threshold = j.value("gt_threshold", c.gt_threshold);
        c.laplacian_levels = j.value("laplacian_levels", c.laplacian_levels);
        c.poisson_tol = j.value("poisson_tol", c.poisson_tol);
        c.poisson_max_iter = j.value("poisson_max_iter", c.poisson_max_iter);
        c.rational_filter = j.value("rational_filter", c.rational_filter);
    } catch (const json::exception& e) {
        throw InvalidInputError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::ordered_json config_to_json(const GenerationConfig& c) {
    nlohmann::ordered_json j;
    j["global_seed"] = c.global_seed;
    j["version"] = to_string(c.version);
    j["matting"] = {{"erode_radius", c.matting.erode_radius},
                    {"dilate_radius", c.matting.dilate_radius},
                    {"method", matting::to_string(c.matting.method)},
                    {"guided_radius", c.matting.guided_radius},
                    {"guided_epsilon", c.matting.guided_epsilon}};
    j["matting_weights"] = weights_to_json(c.matting_weights);
    j["blend_weights"] = weights_to_json(c.blend_weights);
    j["harmonize_weights"] = weights_to_json(c.harmonize_weights);
    j["p_refine"] = c.p_refine;
    j["p_harmonize"] = c.p_harmonize;
    j["v1_harmonize"] = harmonization::to_string(c.v1_harmonize);
    j["placement"] = {{"max_area_ratio", c.placement.max_area_ratio},
                      {"scale_ladder", c.placement.scale_ladder},
                      {"n_samples", c.placement.n_samples},
                      {"scorer", c.scorer}};
    j["enforce_area_ratio"] = c.area_ratio_enforced();
    nlohmann::ordered_json attacks = nlohmann::ordered_json::array();
    for (const auto& a : c.attacks) {
        nlohmann::ordered_json aj;
        aj["kind"] = to_string(a.kind);
        aj["probability"] = a.probability;
        if (a.kind == AttackKind::Resize) {
            aj["width"] = a.width;
            aj["height"] = a.height;
        } else {
            aj[param_name(a.kind)] = {a.lo, a.hi};
        }
        attacks.push_back(aj);
    }
    j["attacks"] = attacks;
    j["gt_threshold"] = c.gt_threshold;
    j["laplacian_levels"] = c.laplacian_levels;
    j["poisson_tol"] = c.poisson_tol;
    j["poisson_max_iter"] = c.poisson_max_iter;
    j["rational_filter"] = c.rational_filter;
    return j;
}

GenerationConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidInputError("config " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace splicegen::pipeline
