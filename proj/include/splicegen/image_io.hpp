#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "splicegen/image.hpp"

namespace splicegen::io {

// 8-bit <-> real conversion used by every codec path: v -> round(v * 255).
std::uint8_t to_byte(double v);
double from_byte(std::uint8_t b);

// Decodes PNG/JPEG. channels = 3 forces colour, 1 forces grey, 0 keeps the
// file's layout (grey stays 1, anything else becomes 3).
ImageBuffer read_image(const std::filesystem::path& path, int channels = 3);
void write_png(const std::filesystem::path& path, const ImageBuffer& img);

// Masks: any value > 127 reads as 1; written as {0,255}.
BinaryMask read_mask(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const BinaryMask& mask);

AlphaMatte read_alpha(const std::filesystem::path& path);
void write_alpha(const std::filesystem::path& path, const AlphaMatte& alpha);

// Single-channel 8-bit images written verbatim.
void write_gray8(const std::filesystem::path& path, int width, int height,
                 const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_gray8(const std::filesystem::path& path, int& width, int& height);

// Encode to JPEG at the given quality and decode again, in memory.
ImageBuffer jpeg_roundtrip(const ImageBuffer& img, int quality);

}  // namespace splicegen::io
