#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "weldkit/image.hpp"

namespace weldkit {

/// Decoded interleaved samples, 1 (gray) or 3 (RGB) channels, 8 bits each.
struct Raster {
    std::size_t width = 0;
    std::size_t height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;
};

// Binary PGM (P5, maxval 255) is the canonical on-disk grayscale format.
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);
GrayImage read_pgm(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const GrayImage& image);
Raster read_png(const std::filesystem::path& path);
Raster read_jpeg(const std::filesystem::path& path);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace weldkit
