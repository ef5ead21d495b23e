#include "splicegen/harmonization.hpp"

#include <algorithm>
#include <cmath>

#include "splicegen/imaging.hpp"

namespace splicegen::harmonization {

RegionStats region_stats(const ImageBuffer& lab, const BinaryMask& mask, bool value) {
    require_same_dims(lab.dims(), mask.dims(), "region_stats");
    RegionStats s;
    const std::size_t n = lab.pixel_count();
    const auto m = mask.data();
    const auto d = lab.data();
    for (std::size_t i = 0; i < n; ++i) {
        if ((m[i] != 0) != value) continue;
        ++s.count;
        for (int c = 0; c < 3; ++c) s.mean[c] += d[3 * i + c];
    }
    if (s.count == 0) return s;
    for (int c = 0; c < 3; ++c) s.mean[c] /= static_cast<double>(s.count);
    // Two-pass variance.
    for (std::size_t i = 0; i < n; ++i) {
        if ((m[i] != 0) != value) continue;
        for (int c = 0; c < 3; ++c) {
            const double dv = d[3 * i + c] - s.mean[c];
            s.stddev[c] += dv * dv;
        }
    }
    for (int c = 0; c < 3; ++c) s.stddev[c] = std::sqrt(s.stddev[c] / static_cast<double>(s.count));
    return s;
}

double transfer_value(double v, double mu_fg, double sigma_fg, double mu_bg, double sigma_bg) {
    if (sigma_fg < 1e-6) return v - mu_fg + mu_bg;
    return (v - mu_fg) * (sigma_bg / sigma_fg) + mu_bg;
}

HarmonizeResult harmonize(const ImageBuffer& composite, const BinaryMask& gt) {
    require_same_dims(composite.dims(), gt.dims(), "harmonize");
    if (composite.channels() != 3) throw InvalidInputError("harmonize: expected 3 channels");
    const std::size_t fg_count = gt.count();
    const std::size_t bg_count = gt.pixel_count() - fg_count;
    if (fg_count < kMinRegionPixels || bg_count < kMinRegionPixels) return {composite, false};

    ImageBuffer lab = imaging::rgb_to_lab(composite);
    const RegionStats fg = region_stats(lab, gt, true);
    const RegionStats bg = region_stats(lab, gt, false);
    const std::size_t n = lab.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        if (!gt.storage()[i]) continue;
        for (int c = 0; c < 3; ++c) {
            double& v = lab.storage()[3 * i + c];
            v = transfer_value(v, fg.mean[c], fg.stddev[c], bg.mean[c], bg.stddev[c]);
        }
    }
    const ImageBuffer back = imaging::lab_to_rgb(lab);
    ImageBuffer out = composite;
    for (std::size_t i = 0; i < n; ++i) {
        if (!gt.storage()[i]) continue;
        for (int c = 0; c < 3; ++c)
            out.storage()[3 * i + c] = std::clamp(back.storage()[3 * i + c], 0.0, 1.0);
    }
    return {std::move(out), true};
}

bool harmonize_gate(RandomStream& stream, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInputError("p_harmonize must be in [0,1]");
    return stream.bernoulli(p);
}

std::string to_string(HarmonizeMethod m) {
    switch (m) {
        case HarmonizeMethod::StatsTransfer: return "stats_transfer";
        case HarmonizeMethod::External: return "external";
        case HarmonizeMethod::None: return "none";
    }
    return "unknown";
}

HarmonizeMethod harmonize_method_from_string(const std::string& s) {
    if (s == "stats_transfer") return HarmonizeMethod::StatsTransfer;
    if (s == "external") return HarmonizeMethod::External;
    if (s == "none") return HarmonizeMethod::None;
    throw InvalidInputError("unknown harmonization method: " + s);
}

}  // namespace splicegen::harmonization
