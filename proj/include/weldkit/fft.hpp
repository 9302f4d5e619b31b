#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "weldkit/image.hpp"

namespace weldkit {

using Complex = std::complex<double>;

struct ComplexField {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Complex> data;

    Complex& at(std::size_t x, std::size_t y) { return data[y * width + x]; }
    Complex at(std::size_t x, std::size_t y) const { return data[y * width + x]; }
};

/// Unnormalized 2-D DFT.
ComplexField forward_transform(const Field& field);
ComplexField forward_transform(const ComplexField& field);

/// Inverse DFT scaled by 1/(width*height), so inverse(forward(x)) == x.
ComplexField inverse_transform(const ComplexField& spectrum);
/// Real part of the inverse.
Field inverse_transform_real(const ComplexField& spectrum);

/// Non-redundant half of the DFT of a real field: columns 0..width/2,
/// so the result is (width/2 + 1) x height.
ComplexField forward_real(const Field& field);
/// Inverse of forward_real back to a `width`-wide real field, scaled by
/// 1/(width*height).
Field inverse_real(const ComplexField& half, std::size_t width);

/// Smallest n' >= n whose only prime factors are 2, 3, 5, 7.
std::size_t good_transform_size(std::size_t n);

}  // namespace weldkit
