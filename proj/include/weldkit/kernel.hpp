#pragma once

#include <cstddef>
#include <vector>

namespace weldkit {

/// Non-negative, unit-sum 2-D filter with odd dimensions; the anchor is the
/// center tap.
class Kernel {
public:
    /// Validates: odd sides, weights.size() == w*h, weights >= 0, sum == 1 (1e-9).
    Kernel(std::size_t width, std::size_t height, std::vector<double> weights);

    /// Scales non-negative weights to unit sum before validating.
    static Kernel normalized(std::size_t width, std::size_t height, std::vector<double> weights);
    static Kernel identity() { return Kernel(1, 1, {1.0}); }

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t half_width() const { return width_ / 2; }
    std::size_t half_height() const { return height_ / 2; }
    double at(std::size_t x, std::size_t y) const { return weights_[y * width_ + x]; }
    const std::vector<double>& weights() const { return weights_; }

    Kernel transposed() const;

    bool operator==(const Kernel&) const = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> weights_;
};

}  // namespace weldkit
