#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "splicegen/error.hpp"

namespace splicegen {

struct Dims {
    int width = 0;
    int height = 0;

    bool operator==(const Dims&) const = default;
    std::size_t area() const { return static_cast<std::size_t>(width) * height; }
};

// Row-major, channel-interleaved raster. Storage is a plain vector so the
// type has value semantics and is safe to share read-only across threads.
template <typename T>
class Grid {
public:
    using value_type = T;

    Grid() = default;
    Grid(int width, int height, int channels, T fill = T{})
        : width_(width), height_(height), channels_(channels) {
        check_dims();
        data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
    }
    Grid(int width, int height, int channels, std::vector<T> data)
        : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
        check_dims();
        if (data_.size() != static_cast<std::size_t>(width) * height * channels)
            throw InvalidInputError("raster data length does not match dimensions");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    Dims dims() const noexcept { return {width_, height_}; }
    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
    bool empty() const noexcept { return data_.empty(); }

    std::size_t index(int x, int y, int c = 0) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }
    T& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }
    const T& at(int x, int y, int c = 0) const noexcept { return data_[index(x, y, c)]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }
    std::vector<T>& storage() noexcept { return data_; }
    const std::vector<T>& storage() const noexcept { return data_; }

    bool same_shape(const Dims& d) const noexcept { return dims() == d; }

    bool operator==(const Grid&) const = default;

private:
    void check_dims() const {
        if (width_ <= 0 || height_ <= 0)
            throw InvalidInputError("raster dimensions must be positive");
        if (channels_ <= 0) throw InvalidInputError("raster channel count must be positive");
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<T> data_;
};

// Real-valued image with 1 or 3 channels, nominal range [0,1].
class ImageBuffer : public Grid<double> {
public:
    ImageBuffer() = default;
    ImageBuffer(int width, int height, int channels, double fill = 0.0)
        : Grid(width, height, channels, fill) {
        check_channels();
    }
    ImageBuffer(int width, int height, int channels, std::vector<double> data)
        : Grid(width, height, channels, std::move(data)) {
        check_channels();
    }

    void clamp();
    ImageBuffer extract_channel(int c) const;

private:
    void check_channels() const {
        if (channels() != 1 && channels() != 3)
            throw InvalidInputError("image must have 1 or 3 channels");
    }
};

// Values strictly in {0,1}.
class BinaryMask : public Grid<std::uint8_t> {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false)
        : Grid(width, height, 1, static_cast<std::uint8_t>(fill ? 1 : 0)) {}
    BinaryMask(int width, int height, std::vector<std::uint8_t> data);

    bool test(int x, int y) const noexcept { return at(x, y) != 0; }
    void set(int x, int y, bool v = true) noexcept { at(x, y) = v ? 1 : 0; }
    std::size_t count() const noexcept;
};

// Per-pixel transparency in [0,1]; 1 = foreground.
class AlphaMatte : public Grid<double> {
public:
    AlphaMatte() = default;
    AlphaMatte(int width, int height, double fill = 0.0) : Grid(width, height, 1, fill) {}
    AlphaMatte(int width, int height, std::vector<double> data)
        : Grid(width, height, 1, std::move(data)) {}

    static AlphaMatte from_mask(const BinaryMask& mask);
};

inline void require_same_dims(Dims a, Dims b, const char* what) {
    if (a != b) throw InvalidInputError(std::string(what) + ": dimension mismatch");
}

}  // namespace splicegen
