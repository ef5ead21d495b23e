#include "splicegen/compose.hpp"

#include <algorithm>
#include <cmath>
#include <unistd.h>

#include "splicegen/blending.hpp"
#include "splicegen/harmonization.hpp"
#include "splicegen/image_io.hpp"
#include "splicegen/imaging.hpp"
#include "splicegen/placement.hpp"

namespace splicegen::pipeline {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

nlohmann::ordered_json AttackSpec::to_json() const {
    ordered_json j;
    j["kind"] = to_string(kind);
    switch (kind) {
        case AttackKind::Blur: j["sigma"] = value; break;
        case AttackKind::GaussianNoise: j["std"] = value; break;
        case AttackKind::Jpeg: j["quality"] = static_cast<int>(value); break;
        case AttackKind::Resize:
            j["width"] = width;
            j["height"] = height;
            break;
    }
    return j;
}

void apply_attack(const AttackSpec& attack, ImageBuffer& image, BinaryMask& gt, RandomStream& noise) {
    switch (attack.kind) {
        case AttackKind::Blur: image = imaging::gaussian_blur(image, attack.value); break;
        case AttackKind::GaussianNoise:
            for (double& v : image.storage()) v += attack.value * noise.normal();
            image.clamp();
            break;
        case AttackKind::Resize:
            image = imaging::resize_bilinear(image, attack.width, attack.height);
            gt = imaging::resize_nearest(gt, attack.width, attack.height);
            break;
        case AttackKind::Jpeg: image = io::jpeg_roundtrip(image, static_cast<int>(attack.value)); break;
    }
}

std::vector<AttackSpec> draw_attacks(const std::vector<AttackRule>& rules, RandomStream& stream) {
    constexpr AttackKind order[] = {AttackKind::Blur, AttackKind::GaussianNoise, AttackKind::Resize,
                                    AttackKind::Jpeg};
    std::vector<AttackSpec> out;
    for (AttackKind kind : order) {
        for (const AttackRule& r : rules) {
            if (r.kind != kind) continue;
            if (!stream.bernoulli(r.probability)) continue;
            AttackSpec a;
            a.kind = kind;
            if (kind == AttackKind::Resize) {
                a.width = r.width;
                a.height = r.height;
            } else if (kind == AttackKind::Jpeg) {
                a.value = stream.uniform_int(static_cast<int>(std::lround(r.lo)),
                                             static_cast<int>(std::lround(r.hi)));
            } else {
                a.value = r.lo == r.hi ? r.lo : stream.uniform(r.lo, r.hi);
            }
            out.push_back(a);
        }
    }
    return out;
}

BinaryMask emit_ground_truth(const AlphaMatte& alpha, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw InvalidInputError("gt_threshold must be in (0,1)");
    BinaryMask gt(alpha.width(), alpha.height());
    const auto a = alpha.data();
    auto g = gt.data();
    for (std::size_t i = 0; i < a.size(); ++i) g[i] = a[i] > threshold ? 1 : 0;
    return gt;
}

Adapters Adapters::from_env() {
    return {adapter::command_from_env(adapter::AdapterKind::Matting),
            adapter::command_from_env(adapter::AdapterKind::Harmonization),
            adapter::command_from_env(adapter::AdapterKind::Rationality)};
}

Roi matting_roi(const placement::PlacementSpec& spec, Dims bg, const matting::MattingParams& p) {
    // Unknown pixels lie within dilate_radius of the object; the guided
    // filter output there depends on pixels up to 2 * guided_radius away.
    const int margin = p.dilate_radius + 2 * p.guided_radius + 1;
    return {std::max(0, spec.x - margin), std::max(0, spec.y - margin),
            std::min(bg.width, spec.x + spec.width + margin),
            std::min(bg.height, spec.y + spec.height + margin)};
}

namespace {

struct Assets {
    ImageBuffer background;
    ImageBuffer foreground;
    BinaryMask mask;
    std::vector<std::string> warnings;
};

Assets load_assets(const ManifestEntry& e) {
    Assets a;
    a.background = io::read_image(e.background, 3);
    a.foreground = io::read_image(e.foreground, 3);
    if (e.mask) {
        a.mask = io::read_mask(*e.mask);
    } else {
        a.mask = rasterize_polygons(e.polygons, a.foreground.dims(), &a.warnings);
    }
    if (a.mask.dims() != a.foreground.dims())
        throw InvalidInputError("mask dimensions differ from foreground dimensions");
    return a;
}

// Foreground pasted into background coordinates. fg is the scaled object
// replicated outward over the matting ROI; mask is zero outside the rect.
struct Canvas {
    ImageBuffer fg;
    BinaryMask mask;
    Roi roi;
};

Canvas build_canvas(const ImageBuffer& bg, const ImageBuffer& obj, const BinaryMask& obj_mask,
                    const placement::PlacementSpec& spec, const Roi& roi) {
    Canvas c{bg, BinaryMask(bg.width(), bg.height()), roi};
    for (int y = roi.y0; y < roi.y1; ++y) {
        const int sy = std::clamp(y - spec.y, 0, spec.height - 1);
        for (int x = roi.x0; x < roi.x1; ++x) {
            const int sx = std::clamp(x - spec.x, 0, spec.width - 1);
            for (int ch = 0; ch < 3; ++ch) c.fg.at(x, y, ch) = obj.at(sx, sy, ch);
        }
    }
    for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) c.mask.at(spec.x + x, spec.y + y) = obj_mask.at(x, y);
    return c;
}

template <typename Raster>
Raster crop(const Raster& src, const Roi& r) {
    Raster out(r.x1 - r.x0, r.y1 - r.y0);
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) out.at(x - r.x0, y - r.y0) = src.at(x, y);
    return out;
}

ImageBuffer crop_image(const ImageBuffer& src, const Roi& r) {
    ImageBuffer out(r.x1 - r.x0, r.y1 - r.y0, src.channels());
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x)
            for (int c = 0; c < src.channels(); ++c) out.at(x - r.x0, y - r.y0, c) = src.at(x, y, c);
    return out;
}

fs::path scratch_for(const ComposeContext& ctx, const std::string& record_id, const char* stage) {
    fs::path root = ctx.scratch_dir;
    if (root.empty()) root = fs::temp_directory_path() / ("splicegen-" + std::to_string(::getpid()));
    return root / record_id / stage;
}

void cleanup(const fs::path& dir) {
    std::error_code ec;
    fs::remove_all(dir.parent_path(), ec);
}

AlphaMatte matte(const Canvas& canvas, const matting::MattingParams& params,
                 matting::MattingMethod method, const ComposeContext& ctx,
                 const std::string& record_id, ordered_json& prov) {
    using matting::TrimapLabel;
    const matting::Trimap trimap = matting::generate_trimap(crop(canvas.mask, canvas.roi), params);
    const ImageBuffer guide = crop_image(canvas.fg, canvas.roi);
    prov["trimap"] = {{"foreground", trimap.count(TrimapLabel::Foreground)},
                      {"unknown", trimap.count(TrimapLabel::Unknown)},
                      {"background", trimap.count(TrimapLabel::Background)}};
    prov["degenerate"] = matting::is_degenerate(trimap);

    AlphaMatte local;
    matting::MattingParams p = params;
    p.method = method;
    if (method == matting::MattingMethod::External) {
        p.method = matting::MattingMethod::GuidedFilter;
        std::string failure;
        if (ctx.adapters.matting) {
            const fs::path dir = scratch_for(ctx, record_id, "matting");
            try {
                local = adapter::external_matting(*ctx.adapters.matting, dir, guide, trimap);
                // Known regions stay known whatever the model returns.
                for (std::size_t i = 0; i < local.storage().size(); ++i) {
                    if (trimap.storage()[i] == TrimapLabel::Foreground) local.storage()[i] = 1.0;
                    if (trimap.storage()[i] == TrimapLabel::Background) local.storage()[i] = 0.0;
                }
            } catch (const Error& e) {
                failure = e.what();
            }
            cleanup(dir);
        } else {
            failure = "matting adapter not configured";
        }
        if (failure.empty()) {
            prov["method_used"] = "external";
        } else {
            prov["external_fallback"] = true;
            prov["fallback_reason"] = failure;
            prov["method_used"] = matting::to_string(p.method);
            local = matting::refine_alpha(guide, trimap, p);
        }
    } else {
        prov["method_used"] = matting::to_string(method);
        local = matting::refine_alpha(guide, trimap, p);
    }

    AlphaMatte full(canvas.mask.width(), canvas.mask.height());
    const Roi& r = canvas.roi;
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) full.at(x, y) = local.at(x - r.x0, y - r.y0);
    return full;
}

AlphaMatte raw_alpha(const Canvas& canvas) { return AlphaMatte::from_mask(canvas.mask); }

ImageBuffer harmonize_stage(harmonization::HarmonizeMethod method, const ImageBuffer& composite,
                            const BinaryMask& gt, const ComposeContext& ctx,
                            const std::string& record_id, ordered_json& prov) {
    using harmonization::HarmonizeMethod;
    prov["method"] = harmonization::to_string(method);
    if (method == HarmonizeMethod::None) {
        prov["applied"] = false;
        return composite;
    }
    if (method == HarmonizeMethod::External) {
        std::string failure;
        if (ctx.adapters.harmonization) {
            const fs::path dir = scratch_for(ctx, record_id, "harmonization");
            ImageBuffer out;
            try {
                out = adapter::external_harmonization(*ctx.adapters.harmonization, dir, composite, gt);
            } catch (const Error& e) {
                failure = e.what();
            }
            cleanup(dir);
            if (failure.empty()) {
                // Background pixels are never touched by harmonization.
                for (std::size_t i = 0; i < gt.pixel_count(); ++i)
                    if (!gt.storage()[i])
                        for (int c = 0; c < 3; ++c) out.storage()[3 * i + c] = composite.storage()[3 * i + c];
                prov["method_used"] = "external";
                prov["applied"] = true;
                return out;
            }
        } else {
            failure = "harmonization adapter not configured";
        }
        prov["external_fallback"] = true;
        prov["fallback_reason"] = failure;
    }
    prov["method_used"] = "stats_transfer";
    auto result = harmonization::harmonize(composite, gt);
    prov["applied"] = result.applied;
    if (!result.applied) prov["skipped"] = "region smaller than minimum pixel count";
    return std::move(result.image);
}

ordered_json solver_json(const blending::SolverStats& s) {
    return {{"unknowns", s.unknowns}, {"iterations", s.iterations}, {"residuals", s.residuals}};
}

ordered_json placement_json(const placement::PlacementSpec& s, const char* source) {
    return {{"x", s.x}, {"y", s.y}, {"w", s.width}, {"h", s.height}, {"source", source}};
}

ordered_json base_provenance(const ManifestEntry& e, const GenerationConfig& cfg, PipelineVersion v) {
    ordered_json p;
    p["record_id"] = e.record_id;
    p["version"] = to_string(v);
    p["global_seed"] = cfg.global_seed;
    p["seed"] = derive_seed(cfg.global_seed, e.record_id, "record");
    p["split"] = to_string(e.split);
    p["category"] = e.category;
    p["background"] = e.background.generic_string();
    p["foreground"] = e.foreground.generic_string();
    return p;
}

template <typename Enum, typename Parse>
Enum draw_method(const std::vector<MethodWeight>& weights, RandomStream& stream, Parse parse) {
    std::vector<double> w;
    for (const auto& m : weights) w.push_back(m.weight);
    return parse(weights[stream.weighted_index(w)].name);
}

void finish(CompositeRecord& rec, const GenerationConfig& cfg) {
    rec.area_ratio = placement::area_ratio(rec.ground_truth);
    rec.provenance["area_ratio"] = rec.area_ratio;
    rec.provenance["width"] = rec.composite.width();
    rec.provenance["height"] = rec.composite.height();
    rec.provenance["gt_threshold"] = cfg.gt_threshold;
    if (cfg.area_ratio_enforced() && rec.area_ratio > cfg.placement.max_area_ratio)
        throw InfeasiblePlacementError("forged area ratio " + std::to_string(rec.area_ratio) +
                                       " exceeds max_area_ratio");
}

// Scales at which the object keeps some definite foreground after the
// trimap erosion. Smaller copies would matte away to nothing. When no scale
// qualifies the ladder is left alone.
std::vector<double> usable_scales(const BinaryMask& mask, const std::vector<double>& ladder,
                                  const matting::MattingParams& params) {
    std::vector<double> keep;
    for (double s : ladder) {
        const Dims d = placement::scaled_object(mask.dims(), s);
        const BinaryMask scaled = imaging::resize_nearest(mask, d.width, d.height);
        if (imaging::erode(scaled, {params.erode_radius}).count() > 0) keep.push_back(s);
    }
    return keep.empty() ? ladder : keep;
}

placement::PlacementSpec require_inside(const placement::PlacementSpec& s, Dims bg) {
    if (!s.inside(bg)) throw InvalidInputError("placement rectangle lies outside the background");
    return s;
}

}  // namespace

CompositeRecord compose_v1(const ManifestEntry& entry, const GenerationConfig& config,
                           const ComposeContext& ctx) {
    if (!entry.placement) throw InvalidInputError("v1 composition requires an explicit placement");
    const Assets assets = load_assets(entry);
    const placement::PlacementSpec spec = require_inside(*entry.placement, assets.background.dims());

    CompositeRecord rec{entry.record_id, entry.split, entry.category, {}, {}, 0.0,
                        base_provenance(entry, config, PipelineVersion::V1)};
    if (!assets.warnings.empty()) rec.provenance["warnings"] = assets.warnings;
    rec.provenance["placement"] = placement_json(spec, "manifest");

    const ImageBuffer obj = imaging::resize_bilinear(assets.foreground, spec.width, spec.height);
    const BinaryMask obj_mask = imaging::resize_nearest(assets.mask, spec.width, spec.height);
    const Canvas canvas = build_canvas(assets.background, obj, obj_mask, spec,
                                       matting_roi(spec, assets.background.dims(), config.matting));

    ordered_json mprov;
    mprov["refined"] = true;
    mprov["method"] = matting::to_string(config.matting.method);
    const AlphaMatte alpha = matte(canvas, config.matting, config.matting.method, ctx, entry.record_id, mprov);
    rec.provenance["matting"] = mprov;

    blending::BlendRequest req{canvas.fg, assets.background, alpha, blending::BlendMode::Alpha};
    ImageBuffer composite = blending::alpha_blend(req);
    rec.provenance["blend"] = {{"requested", "alpha"}, {"used", "alpha"}};

    rec.ground_truth = emit_ground_truth(alpha, config.gt_threshold);

    ordered_json hprov;
    hprov["gate"] = nullptr;
    rec.composite = harmonize_stage(config.v1_harmonize, composite, rec.ground_truth, ctx, entry.record_id, hprov);
    rec.provenance["harmonization"] = hprov;
    rec.provenance["attacks"] = ordered_json::array();
    finish(rec, config);
    return rec;
}

CompositeRecord compose_v2(const ManifestEntry& entry, const GenerationConfig& config,
                           const ComposeContext& ctx) {
    const Assets assets = load_assets(entry);
    const Dims bg_dims = assets.background.dims();
    CompositeRecord rec{entry.record_id, entry.split, entry.category, {}, {}, 0.0,
                        base_provenance(entry, config, PipelineVersion::V2)};
    if (!assets.warnings.empty()) rec.provenance["warnings"] = assets.warnings;
    const std::uint64_t g = config.global_seed;

    placement::PlacementSpec spec;
    if (entry.placement) {
        spec = require_inside(*entry.placement, bg_dims);
        rec.provenance["placement"] = placement_json(spec, "manifest");
    } else {
        placement::PlacementConstraints cons = config.placement;
        cons.enforce_area_ratio = config.area_ratio_enforced();
        cons.scale_ladder = usable_scales(assets.mask, cons.scale_ladder, config.matting);
        ordered_json pp;
        placement::RationalityMap map;
        bool fallback = false;
        std::string reason;
        if (config.scorer == "external" && ctx.adapters.rationality) {
            const fs::path dir = scratch_for(ctx, entry.record_id, "rationality");
            const auto& cmd = *ctx.adapters.rationality;
            const ImageBuffer& fg = assets.foreground;
            try {
                map = placement::score_map(assets.background, fg.dims(), cons,
                                           [&](const ImageBuffer& bg, int ow, int oh) {
                                               return adapter::external_rationality(
                                                   cmd, dir, bg, imaging::resize_bilinear(fg, ow, oh));
                                           });
            } catch (const AdapterError& e) {
                fallback = true;
                reason = e.what();
            }
            cleanup(dir);
        } else if (config.scorer == "external") {
            fallback = true;
            reason = "rationality adapter not configured";
        }
        if (config.scorer == "heuristic" || fallback)
            map = placement::score_map(assets.background, assets.foreground.dims(), cons);
        RandomStream stream(derive_seed(g, entry.record_id, "placement"));
        const auto found = placement::randomized_search(map, cons, stream);
        spec = found.spec;
        pp = placement_json(spec, "search");
        pp["scale"] = map.levels[found.scale_index].scale;
        pp["score"] = found.score;
        pp["scorer"] = fallback ? "heuristic" : config.scorer;
        pp["scale_ladder"] = cons.scale_ladder;
        if (fallback) {
            pp["external_fallback"] = true;
            pp["fallback_reason"] = reason;
        }
        rec.provenance["placement"] = pp;
    }

    const ImageBuffer obj = imaging::resize_bilinear(assets.foreground, spec.width, spec.height);
    const BinaryMask obj_mask = imaging::resize_nearest(assets.mask, spec.width, spec.height);
    const Canvas canvas =
        build_canvas(assets.background, obj, obj_mask, spec, matting_roi(spec, bg_dims, config.matting));

    // Matting, gated.
    RandomStream mstream(derive_seed(g, entry.record_id, "matting"));
    ordered_json mprov;
    AlphaMatte alpha;
    if (matting::matte_gate(mstream, config.p_refine)) {
        const auto method = draw_method<matting::MattingMethod>(config.matting_weights, mstream,
                                                                matting::matting_method_from_string);
        mprov["refined"] = true;
        mprov["method"] = matting::to_string(method);
        alpha = matte(canvas, config.matting, method, ctx, entry.record_id, mprov);
    } else {
        mprov["refined"] = false;
        mprov["method"] = "binary_mask";
        alpha = raw_alpha(canvas);
    }
    rec.provenance["matting"] = mprov;

    // Blending.
    RandomStream bstream(derive_seed(g, entry.record_id, "blend"));
    const auto mode = draw_method<blending::BlendMode>(config.blend_weights, bstream,
                                                       blending::blend_mode_from_string);
    blending::BlendRequest req{canvas.fg, assets.background, alpha, mode};
    req.laplacian_levels =
        std::min(config.laplacian_levels, std::max(1, imaging::max_pyramid_levels(bg_dims)));
    req.poisson_tol = config.poisson_tol;
    req.poisson_max_iter = config.poisson_max_iter;
    blending::BlendResult blended = blending::blend(req);
    ordered_json bprov{{"requested", blending::to_string(mode)}, {"used", blending::to_string(blended.mode_used)}};
    if (mode == blending::BlendMode::Laplacian) bprov["levels"] = req.laplacian_levels;
    if (blended.poisson_fallback) bprov["poisson_fallback"] = true;
    if (blended.solver) bprov["solver"] = solver_json(*blended.solver);
    rec.provenance["blend"] = bprov;

    rec.ground_truth = emit_ground_truth(alpha, config.gt_threshold);

    // Harmonization, gated.
    RandomStream hstream(derive_seed(g, entry.record_id, "harmonize"));
    ordered_json hprov;
    const bool hgate = harmonization::harmonize_gate(hstream, config.p_harmonize);
    hprov["gate"] = hgate;
    ImageBuffer composite = std::move(blended.image);
    if (hgate) {
        const auto method = draw_method<harmonization::HarmonizeMethod>(
            config.harmonize_weights, hstream, harmonization::harmonize_method_from_string);
        composite = harmonize_stage(method, composite, rec.ground_truth, ctx, entry.record_id, hprov);
    } else {
        hprov["method"] = "none";
        hprov["applied"] = false;
    }
    rec.provenance["harmonization"] = hprov;

    // Post-processing attacks in fixed order.
    RandomStream astream(derive_seed(g, entry.record_id, "attacks"));
    RandomStream nstream(derive_seed(g, entry.record_id, "noise"));
    ordered_json aprov = ordered_json::array();
    for (const AttackSpec& a : draw_attacks(config.attacks, astream)) {
        apply_attack(a, composite, rec.ground_truth, nstream);
        aprov.push_back(a.to_json());
    }
    rec.provenance["attacks"] = aprov;
    rec.composite = std::move(composite);
    finish(rec, config);
    return rec;
}

CompositeRecord compose(const ManifestEntry& entry, const GenerationConfig& config,
                        const ComposeContext& ctx) {
    return config.version == PipelineVersion::V1 ? compose_v1(entry, config, ctx)
                                                 : compose_v2(entry, config, ctx);
}

}  // namespace splicegen::pipeline
