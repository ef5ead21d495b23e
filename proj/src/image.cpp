#include "splicegen/image.hpp"

#include <algorithm>
#include <numeric>

namespace splicegen {

void ImageBuffer::clamp() {
    for (double& v : storage()) v = std::clamp(v, 0.0, 1.0);
}

ImageBuffer ImageBuffer::extract_channel(int c) const {
    if (c < 0 || c >= channels()) throw InvalidInputError("channel index out of range");
    ImageBuffer out(width(), height(), 1);
    const std::size_t n = pixel_count();
    for (std::size_t i = 0; i < n; ++i) out.storage()[i] = storage()[i * channels() + c];
    return out;
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> data)
    : Grid(width, height, 1, std::move(data)) {
    if (std::any_of(storage().begin(), storage().end(), [](std::uint8_t v) { return v > 1; }))
        throw InvalidInputError("binary mask values must be 0 or 1");
}

std::size_t BinaryMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(storage().begin(), storage().end(), 1));
}

AlphaMatte AlphaMatte::from_mask(const BinaryMask& mask) {
    AlphaMatte out(mask.width(), mask.height());
    std::transform(mask.storage().begin(), mask.storage().end(), out.storage().begin(),
                   [](std::uint8_t v) { return v ? 1.0 : 0.0; });
    return out;
}

}  // namespace splicegen
