#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace weldkit {

/// Round half up, then clamp into the 8-bit range. The single quantization
/// rule used wherever floating-point intensities become pixels.
inline std::uint8_t quantize(double v) {
    const double r = std::floor(v + 0.5);
    if (!(r > 0.0)) return 0;  // also maps NaN to 0
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

/// 8-bit single-channel raster, row-major.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0);
    GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> data);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    std::uint8_t& at(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
    std::uint8_t at(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }

    std::span<std::uint8_t> row(std::size_t y) { return {data_.data() + y * width_, width_}; }
    std::span<const std::uint8_t> row(std::size_t y) const { return {data_.data() + y * width_, width_}; }

    std::span<const std::uint8_t> data() const { return data_; }
    std::span<std::uint8_t> data() { return data_; }

    bool operator==(const GrayImage&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Real-valued raster used for intermediate arithmetic.
struct Field {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> data;

    Field() = default;
    Field(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), data(w * h, fill) {}

    double& at(std::size_t x, std::size_t y) { return data[y * width + x]; }
    double at(std::size_t x, std::size_t y) const { return data[y * width + x]; }
};

Field to_field(const GrayImage& image);
GrayImage to_image(const Field& field);

double mean_intensity(const GrayImage& image);

}  // namespace weldkit
