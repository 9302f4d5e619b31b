#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>

#include "weldkit/geometry.hpp"
#include "weldkit/image.hpp"

namespace weldkit {

enum class Endian { Little, Big };

/// Layout of a headerless row-major RAW frame.
struct RawSpec {
    std::size_t width = 0;
    std::size_t height = 0;
    int bit_depth = 16;  // 8 or 16
    Endian endian = Endian::Little;
    double window_lo = 0;  // 16-bit samples in [lo, hi] map onto [0, 255]
    double window_hi = 65535;

    /// Throws SpecError for bad depth, empty frame or lo >= hi.
    void validate() const;
};

/// Throws DecodeError on a byte-length mismatch.
GrayImage decode_raw(std::span<const std::uint8_t> bytes, const RawSpec& spec);

/// BT.601 luma with round-half-up on interleaved RGB triplets.
GrayImage to_grayscale(std::span<const std::uint8_t> rgb, std::size_t width, std::size_t height);

/// Exact copy of an integer-cornered rectangle; throws GeometryError if it
/// is not fully inside the image.
GrayImage crop(const GrayImage& image, const BBox& rect);

/// Forward map: p' = p * scale + pad.
struct LetterboxTransform {
    double scale = 1.0;
    double pad_left = 0;
    double pad_top = 0;

    BBox apply(const BBox& b) const {
        return {b.xmin * scale + pad_left, b.ymin * scale + pad_top, b.xmax * scale + pad_left, b.ymax * scale + pad_top};
    }
    BBox invert(const BBox& b) const {
        return {(b.xmin - pad_left) / scale, (b.ymin - pad_top) / scale, (b.xmax - pad_left) / scale,
                (b.ymax - pad_top) / scale};
    }
};

inline constexpr std::uint8_t kLetterboxFill = 114;

/// Aspect-preserving resize so the long side equals `target_long_side`, then
/// symmetric padding of the short side up to a multiple of `stride` (odd
/// remainder goes right/bottom).
std::pair<GrayImage, LetterboxTransform> letterbox(const GrayImage& image, std::size_t target_long_side,
                                                   std::size_t stride, std::uint8_t fill = kLetterboxFill);

/// Fit into an arbitrary width x height canvas, centered, same padding rule.
std::pair<GrayImage, LetterboxTransform> fit_into(const GrayImage& image, std::size_t width, std::size_t height,
                                                  std::uint8_t fill = kLetterboxFill);

/// Loads .pgm, .png, .jpg/.jpeg as grayscale; .raw requires a spec.
GrayImage load_gray(const std::filesystem::path& path, const RawSpec* raw = nullptr);

}  // namespace weldkit
