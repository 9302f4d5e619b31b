#include "weldkit/image.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "weldkit/classes.hpp"
#include "weldkit/error.hpp"
#include "weldkit/geometry.hpp"
#include "weldkit/kernel.hpp"

namespace weldkit {

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), data_(width * height, fill) {
    if (width == 0 || height == 0) throw DimensionError("image dimensions must be positive");
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width == 0 || height == 0) throw DimensionError("image dimensions must be positive");
    if (data_.size() != width * height)
        throw DimensionError(fmt::format("image data has {} samples, expected {}x{}", data_.size(), width, height));
}

Field to_field(const GrayImage& image) {
    Field f(image.width(), image.height());
    const auto src = image.data();
    for (std::size_t i = 0; i < src.size(); ++i) f.data[i] = src[i];
    return f;
}

GrayImage to_image(const Field& field) {
    std::vector<std::uint8_t> out(field.data.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = quantize(field.data[i]);
    return GrayImage(field.width, field.height, std::move(out));
}

double mean_intensity(const GrayImage& image) {
    const auto d = image.data();
    return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

// --- geometry ---------------------------------------------------------------

bool BBox::valid() const {
    return std::isfinite(xmin) && std::isfinite(ymin) && std::isfinite(xmax) && std::isfinite(ymax) &&
           xmin < xmax && ymin < ymax;
}

BBox checked(const BBox& box) {
    if (!box.valid())
        throw GeometryError(fmt::format("invalid box ({}, {}, {}, {})", box.xmin, box.ymin, box.xmax, box.ymax));
    return box;
}

double intersection_area(const BBox& a, const BBox& b) {
    const double w = std::min(a.xmax, b.xmax) - std::max(a.xmin, b.xmin);
    const double h = std::min(a.ymax, b.ymax) - std::max(a.ymin, b.ymin);
    return (w > 0 && h > 0) ? w * h : 0.0;
}

std::optional<BBox> clip_to(const BBox& box, double width, double height) {
    BBox c{std::max(box.xmin, 0.0), std::max(box.ymin, 0.0), std::min(box.xmax, width), std::min(box.ymax, height)};
    if (!(c.xmin < c.xmax && c.ymin < c.ymax)) return std::nullopt;
    return c;
}

std::array<Point, 4> corners(const BBox& b) {
    return {Point{b.xmin, b.ymin}, Point{b.xmax, b.ymin}, Point{b.xmax, b.ymax}, Point{b.xmin, b.ymax}};
}

void sincos_deg(double deg, double& s, double& c) {
    const double r = std::fmod(deg, 360.0);
    const double q = r < 0 ? r + 360.0 : r;
    if (q == 0.0) { s = 0; c = 1; return; }
    if (q == 90.0) { s = 1; c = 0; return; }
    if (q == 180.0) { s = 0; c = -1; return; }
    if (q == 270.0) { s = -1; c = 0; return; }
    const double rad = q * M_PI / 180.0;
    s = std::sin(rad);
    c = std::cos(rad);
}

double normalize_half_turn(double deg) {
    double r = std::fmod(deg, 180.0);
    if (r < 0) r += 180.0;
    if (r >= 180.0) r -= 180.0;
    return r;
}

// --- class table ------------------------------------------------------------

std::optional<int> class_id_of(std::string_view label) {
    for (int i = 0; i < kNumClasses; ++i)
        if (kClassLabels[i] == label) return i;
    return std::nullopt;
}

int require_class_id(std::string_view label) {
    if (auto id = class_id_of(label)) return *id;
    throw ClassError("unknown label: " + std::string(label));
}

std::string_view class_label(int class_id) {
    if (class_id < 0 || class_id >= kNumClasses) throw ClassError(fmt::format("unknown class id: {}", class_id));
    return kClassLabels[class_id];
}

// --- kernel -----------------------------------------------------------------

Kernel::Kernel(std::size_t width, std::size_t height, std::vector<double> weights)
    : width_(width), height_(height), weights_(std::move(weights)) {
    if (width % 2 == 0 || height % 2 == 0)
        throw DimensionError(fmt::format("kernel sides must be odd, got {}x{}", width, height));
    if (weights_.size() != width * height) throw DimensionError("kernel weight count does not match its size");
    double sum = 0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("kernel weights must be finite and non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ParameterError(fmt::format("kernel weights sum to {}, expected 1", sum));
}

Kernel Kernel::normalized(std::size_t width, std::size_t height, std::vector<double> weights) {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(sum > 0.0)) throw ParameterError("kernel weights sum to zero");
    for (double& w : weights) w /= sum;
    return Kernel(width, height, std::move(weights));
}

Kernel Kernel::transposed() const {
    std::vector<double> t(weights_.size());
    for (std::size_t y = 0; y < height_; ++y)
        for (std::size_t x = 0; x < width_; ++x) t[x * height_ + y] = weights_[y * width_ + x];
    return Kernel(height_, width_, std::move(t));
}

}  // namespace weldkit
