#pragma once

// Trimap construction from a coarse binary mask and soft alpha refinement
// inside the trimap's unknown band.

#include <cstdint>
#include <string>
#include <vector>

#include "splicegen/image.hpp"
#include "splicegen/random.hpp"

namespace splicegen::matting {

// Numeric values are the serialized 8-bit levels.
enum class TrimapLabel : std::uint8_t { Background = 0, Unknown = 128, Foreground = 255 };

class Trimap : public Grid<TrimapLabel> {
public:
    Trimap() = default;
    Trimap(int width, int height, TrimapLabel fill = TrimapLabel::Background)
        : Grid(width, height, 1, fill) {}

    std::size_t count(TrimapLabel label) const noexcept;
    std::vector<std::uint8_t> to_bytes() const;
    static Trimap from_bytes(int width, int height, const std::vector<std::uint8_t>& bytes);
};

enum class MattingMethod { GuidedFilter, Feather, External };

std::string to_string(MattingMethod m);
MattingMethod matting_method_from_string(const std::string& s);

struct MattingParams {
    int erode_radius = 3;
    int dilate_radius = 3;
    MattingMethod method = MattingMethod::GuidedFilter;
    int guided_radius = 8;
    double guided_epsilon = 1e-4;

    void validate() const;
};

// Foreground = erode(mask), Background = complement of dilate(mask),
// Unknown = the rest.
Trimap generate_trimap(const BinaryMask& mask, const MattingParams& params);

// True when there is nothing to matte: no Foreground and no Unknown pixels.
bool is_degenerate(const Trimap& trimap);

// Dispatches on params.method; External is not an in-process method and is
// rejected. Known trimap pixels are reimposed after filtering, so the result
// is exactly 1 on Foreground and 0 on Background.
AlphaMatte refine_alpha(const ImageBuffer& image, const Trimap& trimap, const MattingParams& params);

// Colour guided filter with the trimap (0, 0.5, 1) as filtering input.
AlphaMatte guided_filter_alpha(const ImageBuffer& guide, const Trimap& trimap, int radius,
                               double epsilon);

// alpha = dB / (dB + dF) in the unknown band, with dB/dF the Euclidean
// distances to the nearest Background/Foreground pixel.
AlphaMatte feather_alpha(const Trimap& trimap);

// Squared Euclidean distance from every pixel to the nearest pixel with
// feature[i] != 0; +inf everywhere when there are none.
std::vector<double> squared_distance_transform(const std::vector<std::uint8_t>& feature, int width,
                                               int height);

// True with probability p_refine.
bool matte_gate(RandomStream& stream, double p_refine);

}  // namespace splicegen::matting
