#pragma once

// Colour-statistics transfer in CIELAB: the pasted region is shifted and
// scaled per channel so its mean and standard deviation match the rest of
// the image.

#include <array>
#include <string>

#include "splicegen/image.hpp"
#include "splicegen/random.hpp"

namespace splicegen::harmonization {

struct RegionStats {
    std::array<double, 3> mean{};
    std::array<double, 3> stddev{};
    std::size_t count = 0;
};

// Population statistics of the Lab image over pixels where mask == value.
RegionStats region_stats(const ImageBuffer& lab, const BinaryMask& mask, bool value);

// (v - mu_fg) * (sigma_bg / sigma_fg) + mu_bg; sigma_fg below 1e-6 gives a
// pure mean shift.
double transfer_value(double v, double mu_fg, double sigma_fg, double mu_bg, double sigma_bg);

constexpr std::size_t kMinRegionPixels = 16;

struct HarmonizeResult {
    ImageBuffer image;
    // False when either region had fewer than kMinRegionPixels pixels; the
    // image is then returned unchanged.
    bool applied = false;
};

// Background pixels (gt = 0) are copied through untouched.
HarmonizeResult harmonize(const ImageBuffer& composite, const BinaryMask& gt);

// True with probability p.
bool harmonize_gate(RandomStream& stream, double p);

enum class HarmonizeMethod { StatsTransfer, External, None };
std::string to_string(HarmonizeMethod m);
HarmonizeMethod harmonize_method_from_string(const std::string& s);

}  // namespace splicegen::harmonization
