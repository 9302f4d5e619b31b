#include "weldkit/ingest.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "weldkit/error.hpp"
#include "weldkit/filter.hpp"
#include "weldkit/image_io.hpp"

namespace weldkit {

void RawSpec::validate() const {
    if (bit_depth != 8 && bit_depth != 16) throw SpecError(fmt::format("raw: unsupported bit depth {}", bit_depth));
    if (width == 0 || height == 0) throw SpecError("raw: width and height must be positive");
    if (!(window_lo < window_hi)) throw SpecError(fmt::format("raw: window lo {} must be below hi {}", window_lo, window_hi));
}

GrayImage decode_raw(std::span<const std::uint8_t> bytes, const RawSpec& spec) {
    spec.validate();
    const std::size_t bytes_per_sample = static_cast<std::size_t>(spec.bit_depth / 8);
    const std::size_t expected = spec.width * spec.height * bytes_per_sample;
    if (bytes.size() != expected)
        throw DecodeError(fmt::format("raw: {} bytes, expected {} for {}x{} at {} bits", bytes.size(), expected,
                                      spec.width, spec.height, spec.bit_depth));
    if (spec.bit_depth == 8) return GrayImage(spec.width, spec.height, {bytes.begin(), bytes.end()});

    std::vector<std::uint8_t> out(spec.width * spec.height);
    const double span = spec.window_hi - spec.window_lo;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint8_t a = bytes[2 * i], b = bytes[2 * i + 1];
        const unsigned v = spec.endian == Endian::Little ? (a | (b << 8)) : ((a << 8) | b);
        out[i] = quantize(255.0 * (double(v) - spec.window_lo) / span);
    }
    return GrayImage(spec.width, spec.height, std::move(out));
}

GrayImage to_grayscale(std::span<const std::uint8_t> rgb, std::size_t width, std::size_t height) {
    if (rgb.size() != width * height * 3)
        throw DimensionError(fmt::format("rgb buffer has {} bytes, expected {}", rgb.size(), width * height * 3));
    std::vector<std::uint8_t> out(width * height);
    for (std::size_t i = 0; i < out.size(); ++i) {
        // Integer form of 0.299R + 0.587G + 0.114B, rounded half up.
        const unsigned luma = 299u * rgb[3 * i] + 587u * rgb[3 * i + 1] + 114u * rgb[3 * i + 2];
        out[i] = static_cast<std::uint8_t>((luma + 500u) / 1000u);
    }
    return GrayImage(width, height, std::move(out));
}

GrayImage crop(const GrayImage& image, const BBox& rect) {
    const bool integral = rect.xmin == std::floor(rect.xmin) && rect.ymin == std::floor(rect.ymin) &&
                          rect.xmax == std::floor(rect.xmax) && rect.ymax == std::floor(rect.ymax);
    if (!rect.valid() || !integral || rect.xmin < 0 || rect.ymin < 0 || rect.xmax > double(image.width()) ||
        rect.ymax > double(image.height()))
        throw GeometryError(fmt::format("crop rect ({}, {}, {}, {}) not an integer rectangle inside {}x{}", rect.xmin,
                                        rect.ymin, rect.xmax, rect.ymax, image.width(), image.height()));
    const auto x0 = static_cast<std::size_t>(rect.xmin);
    const auto y0 = static_cast<std::size_t>(rect.ymin);
    const auto w = static_cast<std::size_t>(rect.xmax) - x0;
    const auto h = static_cast<std::size_t>(rect.ymax) - y0;
    GrayImage out(w, h);
    for (std::size_t y = 0; y < h; ++y) {
        const auto src = image.row(y0 + y).subspan(x0, w);
        std::copy(src.begin(), src.end(), out.row(y).begin());
    }
    return out;
}

namespace {

std::size_t scaled_side(std::size_t side, double scale) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(double(side) * scale + 0.5)));
}

std::pair<GrayImage, LetterboxTransform> pad_resized(const GrayImage& image, double scale, std::size_t new_w,
                                                     std::size_t new_h, std::size_t out_w, std::size_t out_h,
                                                     std::uint8_t fill) {
    const GrayImage resized = resize_bilinear(image, new_w, new_h);
    const std::size_t left = (out_w - new_w) / 2;
    const std::size_t top = (out_h - new_h) / 2;
    GrayImage out(out_w, out_h, fill);
    for (std::size_t y = 0; y < new_h; ++y) {
        const auto src = resized.row(y);
        std::copy(src.begin(), src.end(), out.row(top + y).begin() + static_cast<std::ptrdiff_t>(left));
    }
    // Effective per-axis scale can differ from `scale` by rounding; boxes use
    // the nominal scale so apply/invert stay exact inverses.
    return {std::move(out), LetterboxTransform{scale, double(left), double(top)}};
}

}  // namespace

std::pair<GrayImage, LetterboxTransform> letterbox(const GrayImage& image, std::size_t target_long_side,
                                                   std::size_t stride, std::uint8_t fill) {
    if (stride == 0) throw ParameterError("letterbox: stride must be >= 1");
    if (target_long_side == 0 || target_long_side % stride != 0)
        throw ParameterError(fmt::format("letterbox: target {} is not a multiple of stride {}", target_long_side, stride));
    const double scale = double(target_long_side) / double(std::max(image.width(), image.height()));
    const std::size_t new_w = image.width() >= image.height() ? target_long_side : scaled_side(image.width(), scale);
    const std::size_t new_h = image.height() >= image.width() ? target_long_side : scaled_side(image.height(), scale);
    auto round_up = [stride](std::size_t v) { return (v + stride - 1) / stride * stride; };
    return pad_resized(image, scale, new_w, new_h, round_up(new_w), round_up(new_h), fill);
}

std::pair<GrayImage, LetterboxTransform> fit_into(const GrayImage& image, std::size_t width, std::size_t height,
                                                  std::uint8_t fill) {
    if (width == 0 || height == 0) throw ParameterError("fit_into: empty canvas");
    const double scale = std::min(double(width) / double(image.width()), double(height) / double(image.height()));
    const std::size_t new_w = std::min(width, scaled_side(image.width(), scale));
    const std::size_t new_h = std::min(height, scaled_side(image.height(), scale));
    return pad_resized(image, scale, new_w, new_h, width, height, fill);
}

GrayImage load_gray(const std::filesystem::path& path, const RawSpec* raw) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    if (ext == ".pgm") return read_pgm(path);
    if (ext == ".raw") {
        if (!raw) throw ParameterError("raw input requires --raw-width/--raw-height");
        const auto bytes = read_bytes(path);
        try {
            return decode_raw(bytes, *raw);
        } catch (const DecodeError& e) {
            throw DecodeError(path.string() + ": " + e.what());
        }
    }
    Raster r;
    if (ext == ".png")
        r = read_png(path);
    else if (ext == ".jpg" || ext == ".jpeg")
        r = read_jpeg(path);
    else
        throw InputError("unsupported image type: " + path.string());
    if (r.channels == 3) return to_grayscale(r.data, r.width, r.height);
    return GrayImage(r.width, r.height, std::move(r.data));
}

}  // namespace weldkit
